#include "poplab/cost.hpp"

#include <cmath>
#include <limits>

#include "poplab/error.hpp"

namespace poplab {

CostSpec CostSpec::linear_separable(std::vector<double> rates) {
    require(!rates.empty(), ErrorKind::validation, "cost: empty rate vector");
    bool any_positive = false;
    for (double r : rates) {
        require(std::isfinite(r) && r >= 0.0, ErrorKind::validation,
                "cost: rates must be finite and non-negative");
        any_positive = any_positive || r > 0.0;
    }
    require(any_positive, ErrorKind::admissibility,
            "cost: all rates are zero, movement would be free and unbounded");
    return CostSpec(std::move(rates));
}

double cost_eval(const CostSpec& c, const FeatureVector& x, const FeatureVector& u) {
    if (x.size() != c.dim() || u.size() != c.dim()) {
        fail(ErrorKind::validation, "cost_eval: dimension mismatch (cost " + std::to_string(c.dim()) +
                                        ", x " + std::to_string(x.size()) + ", u " + std::to_string(u.size()) +
                                        ")");
    }
    const auto rates = c.rates();
    double total = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (rates[i] == 0.0) continue;
        const double up = u[i] - x[i];
        if (up > 0.0) total += rates[i] * up;
    }
    return total;
}

BudgetT budget_t(const CostSpec& c) {
    const auto rates = c.rates();
    std::size_t best = rates.size();
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (rates[i] > 0.0 && (best == rates.size() || rates[i] < rates[best])) best = i;
    }
    require(best < rates.size(), ErrorKind::admissibility, "budget_t: no cost-bearing axis");
    return BudgetT{2.0 / rates[best], best};
}

AdmissibilityReport check_admissible(const CostSpec& c, std::span<const FeatureVector> probes) {
    require(!probes.empty(), ErrorKind::validation, "check_admissible: empty probe set");
    AdmissibilityReport report;
    const std::size_t n = probes.size();
    const std::size_t d = c.dim();
    const BudgetT budget = budget_t(c);

    for (std::size_t i = 0; i < n; ++i) {
        const FeatureVector& x = probes[i];
        const FeatureVector& y = probes[(i + 1) % n];
        const FeatureVector& z = probes[(i + 2) % n];
        require(x.size() == d, ErrorKind::validation, "check_admissible: probe dimension mismatch");

        std::vector<double> delta(d), xd(d), yd(d);
        for (std::size_t k = 0; k < d; ++k) {
            delta[k] = z[k] - x[k] + 0.5 * (y[k] - x[k]);
            xd[k] = x[k] + delta[k];
            yd[k] = y[k] + delta[k];
        }
        const double cx = cost_eval(c, x, FeatureVector(xd));
        const double cy = cost_eval(c, y, FeatureVector(yd));
        const double gap = std::abs(cx - cy);
        if (gap > 1e-12 * std::max(1.0, std::max(cx, cy))) {
            report.invariant = false;
            report.violations.push_back({x, y, delta, gap});
        }

        std::vector<double> step(x.begin(), x.end());
        step[budget.axis] += 0.5 * budget.t;
        if (!(cost_eval(c, x, FeatureVector(step)) <= 2.0)) {
            report.feasible = false;
            report.violations.push_back({x, x, std::vector<double>(d, 0.0), 0.0});
        }
        ++report.probes_checked;
    }
    return report;
}

}  // namespace poplab
