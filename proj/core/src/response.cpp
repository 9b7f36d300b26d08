#include "poplab/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "poplab/error.hpp"

namespace poplab {

namespace {

void check_dims(const Classifier& g, const CostSpec& c, const FeatureVector& x) {
    if (c.dim() != x.size()) {
        fail(ErrorKind::validation, "response: cost has d=" + std::to_string(c.dim()) + ", point has d=" +
                                        std::to_string(x.size()));
    }
    if (!(g.is_threshold() ? g.axis() < x.size() : g.weights().size() == x.size())) {
        fail(ErrorKind::validation,
             "response: classifier " + g.describe() + " does not fit d=" + std::to_string(x.size()));
    }
}

// Moves coordinate `axis` of u by `shift`, then nudges it until g accepts.
// Rounding can leave the exact boundary point a hair short; the nudge starts
// at one ulp and doubles, so the overshoot stays within the rounding noise of
// the score.
FeatureVector move_to_boundary(const Classifier& g, const FeatureVector& x, std::size_t axis,
                               double shift, double direction) {
    FeatureVector u = x;
    double value = x[axis] + shift;
    u.set(axis, value);
    const double sign = direction > 0 ? 1.0 : -1.0;
    double step = std::max(std::abs(value) * std::numeric_limits<double>::epsilon(),
                           std::numeric_limits<double>::denorm_min());
    for (int i = 0; i < 2100 && g.score(u) < 0.0; ++i) {
        value = x[axis] + shift + sign * step;
        u.set(axis, value);
        step *= 2.0;
    }
    if (g.score(u) < 0.0) {
        fail(ErrorKind::numeric, "best_response: could not reach the boundary of " + g.describe());
    }
    return u;
}

FeatureVector best_response_threshold(const Classifier& g, const CostSpec& c, const FeatureVector& x) {
    const std::size_t a = g.axis();
    const double thr = g.threshold_value();
    if (!std::isfinite(thr)) return x;
    if (!reaches_threshold(x[a], thr, c.rate(a))) return x;
    FeatureVector u = x;
    u.set(a, thr);
    return u;
}

FeatureVector best_response_linear(const Classifier& g, const CostSpec& c, const FeatureVector& x) {
    const auto& w = g.weights();
    const auto rates = c.rates();
    const double gap = -g.score(x);

    // Directions that raise the score at zero cost: any free axis, or lowering
    // a cost-bearing feature that has negative weight.
    std::size_t free_axis = w.size();
    for (std::size_t j = 0; j < w.size(); ++j) {
        const bool free_gain = (rates[j] == 0.0 && w[j] != 0.0) || (rates[j] > 0.0 && w[j] < 0.0);
        if (free_gain && (free_axis == w.size() || std::abs(w[j]) > std::abs(w[free_axis]))) {
            free_axis = j;
        }
    }
    if (free_axis < w.size()) {
        return move_to_boundary(g, x, free_axis, gap / w[free_axis], w[free_axis]);
    }

    std::size_t cheapest = w.size();
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (rates[j] > 0.0 && w[j] > 0.0 &&
            (cheapest == w.size() || rates[j] / w[j] < rates[cheapest] / w[cheapest])) {
            cheapest = j;
        }
    }
    if (cheapest == w.size()) return x;

    const double shift = gap / w[cheapest];
    if (!(rates[cheapest] * shift < 2.0)) return x;
    FeatureVector u = move_to_boundary(g, x, cheapest, shift, 1.0);
    return cost_eval(c, x, u) < 2.0 ? u : x;
}

}  // namespace

FeatureVector best_response(const Classifier& g, const CostSpec& c, const FeatureVector& x) {
    check_dims(g, c, x);
    if (g.predict(x) == Label::positive) return x;
    return g.is_threshold() ? best_response_threshold(g, c, x) : best_response_linear(g, c, x);
}

GridSpec GridSpec::cube(std::size_t dim, double half_width, double step) {
    return GridSpec{std::vector<double>(dim, -half_width), std::vector<double>(dim, half_width), step};
}

FeatureVector best_response_bruteforce(const Classifier& g, const CostSpec& c,
                                       const FeatureVector& x, const GridSpec& grid) {
    check_dims(g, c, x);
    const std::size_t d = x.size();
    require(grid.lower.size() == d && grid.upper.size() == d, ErrorKind::validation,
            "bruteforce: grid dimension mismatch");
    require(grid.step > 0.0 && std::isfinite(grid.step), ErrorKind::validation,
            "bruteforce: grid step must be positive");

    std::vector<long long> lo(d), hi(d);
    double points = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
        lo[k] = static_cast<long long>(std::ceil(grid.lower[k] / grid.step));
        hi[k] = static_cast<long long>(std::floor(grid.upper[k] / grid.step));
        require(lo[k] <= hi[k], ErrorKind::validation, "bruteforce: empty grid");
        points *= static_cast<double>(hi[k] - lo[k] + 1);
    }
    require(points <= 1e8, ErrorKind::validation, "bruteforce: grid has too many points");

    auto utility = [&](const FeatureVector& u) {
        return static_cast<double>(to_int(g.predict(u))) - cost_eval(c, x, u);
    };

    FeatureVector best = x;
    double best_utility = utility(x);
    bool best_is_x = true;

    std::vector<long long> idx = lo;
    std::vector<double> coords(d);
    while (true) {
        for (std::size_t k = 0; k < d; ++k) coords[k] = x[k] + static_cast<double>(idx[k]) * grid.step;
        FeatureVector u(coords);
        const double value = utility(u);
        if (value > best_utility ||
            (value == best_utility && !best_is_x &&
             std::lexicographical_compare(u.begin(), u.end(), best.begin(), best.end()))) {
            best = std::move(u);
            best_utility = value;
            best_is_x = false;
        }
        std::size_t k = 0;
        while (k < d && idx[k] == hi[k]) {
            idx[k] = lo[k];
            ++k;
        }
        if (k == d) break;
        ++idx[k];
    }
    return best;
}

FeatureVector safe_response(const Classifier& g, const CostSpec& c, const FeatureVector& x, double k) {
    require(k >= 0.0 && k <= 2.0, ErrorKind::validation, "safe_response: k must lie in [0, 2]");
    const FeatureVector moved = best_response(g, c, x);
    if (moved == x) return x;
    const double base = cost_eval(c, x, moved);
    if (base <= 0.0) return moved;
    const double target = std::max(base, std::min(base + k, 2.0 - kSafeBudgetSlack));
    const double scale = target / base;
    std::vector<double> u(x.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = x[i] + scale * (moved[i] - x[i]);
    return FeatureVector(std::move(u));
}

FeatureVector respond(const ResponsePolicy& policy, const CostSpec& c, const FeatureVector& x) {
    return std::visit(
        [&](const auto& p) -> FeatureVector {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Truthful>) return x;
            else if constexpr (std::is_same_v<T, BestResponse>) return best_response(p.believed, c, x);
            else return safe_response(p.believed, c, x, p.k);
        },
        policy);
}

ResponsePolicy policy_for(const ContestantModel& model, double safety_k) {
    if (model.no_information) return Truthful{};
    if (safety_k > 0.0) return SafeResponse{model.classifier, safety_k};
    return BestResponse{model.classifier};
}

}  // namespace poplab
