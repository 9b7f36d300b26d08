#include "poplab/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "poplab/error.hpp"
#include "poplab/response.hpp"

namespace poplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point1d {
    double v;
    Label y;
};

std::vector<Point1d> sorted_axis(const Dataset& ds, std::size_t axis) {
    require(axis < ds.dim(), ErrorKind::validation, "axis out of range for dataset");
    std::vector<Point1d> pts;
    pts.reserve(ds.size());
    for (const auto& e : ds) pts.push_back({e.x[axis], e.y});
    std::stable_sort(pts.begin(), pts.end(), [](const Point1d& a, const Point1d& b) { return a.v < b.v; });
    return pts;
}

// positives_before[k] = number of positives among the first k sorted points.
std::vector<std::size_t> positive_prefix(const std::vector<Point1d>& pts) {
    std::vector<std::size_t> prefix(pts.size() + 1, 0);
    for (std::size_t i = 0; i < pts.size(); ++i)
        prefix[i + 1] = prefix[i] + (pts[i].y == Label::positive ? 1 : 0);
    return prefix;
}

// Errors when exactly the suffix starting at `cut` is accepted.
std::size_t cut_errors(const std::vector<std::size_t>& prefix, std::size_t cut) {
    const std::size_t n = prefix.size() - 1;
    const std::size_t pos_below = prefix[cut];
    const std::size_t neg_above = (n - cut) - (prefix[n] - prefix[cut]);
    return pos_below + neg_above;
}

double dot(const std::vector<double>& w, const FeatureVector& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
    return s;
}

}  // namespace

void validate(const TrainConfig& cfg) {
    require(cfg.epochs >= 1, ErrorKind::validation, "train: epochs must be at least 1");
    require(cfg.step > 0.0 && std::isfinite(cfg.step), ErrorKind::validation,
            "train: step must be positive");
    require(cfg.l2 >= 0.0 && std::isfinite(cfg.l2), ErrorKind::validation,
            "train: l2 must be non-negative");
}

double empirical_error(const Classifier& g, const Dataset& ds) {
    require(!ds.empty(), ErrorKind::validation, "empirical_error: empty dataset");
    std::size_t wrong = 0;
    for (const auto& e : ds) wrong += g.predict(e.x) != e.y ? 1 : 0;
    return static_cast<double>(wrong) / static_cast<double>(ds.size());
}

Classifier fit_threshold_erm(const Dataset& train, std::size_t axis, TieRule tie) {
    require(!train.empty(), ErrorKind::validation, "fit_threshold_erm: empty training set");
    const auto pts = sorted_axis(train, axis);
    const auto prefix = positive_prefix(pts);
    const std::size_t n = pts.size();

    // Candidate -inf accepts everything (cut 0), candidate pts[k].v accepts
    // the suffix from the first copy of that value, +inf accepts nothing.
    double best_value = -kInf;
    double below = -kInf;  // largest coordinate under the chosen threshold
    std::size_t best_err = cut_errors(prefix, 0);
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && pts[k].v == pts[k - 1].v) continue;
        const std::size_t err = cut_errors(prefix, k);
        if (err < best_err) {
            best_err = err;
            best_value = pts[k].v;
            below = k > 0 ? pts[k - 1].v : -kInf;
        }
    }
    if (cut_errors(prefix, n) < best_err) {
        best_value = kInf;
        below = kInf;
    }

    if (tie == TieRule::midpoint && std::isfinite(best_value) && std::isfinite(below)) {
        best_value = below + 0.5 * (best_value - below);
    }
    return Classifier::threshold(axis, best_value);
}

Classifier fit_linear_erm(const Dataset& train, const TrainConfig& cfg) {
    validate(cfg);
    require(!train.empty(), ErrorKind::validation, "fit_linear_erm: empty training set");
    const std::size_t d = train.dim();
    const double n = static_cast<double>(train.size());

    std::vector<double> w(d, 0.0), grad(d);
    double b = 0.0;
    std::vector<double> best_w;
    double best_b = 0.0;
    double best_obj = kInf;

    auto objective_and_grad = [&](double& grad_b) {
        std::fill(grad.begin(), grad.end(), 0.0);
        grad_b = 0.0;
        double hinge = 0.0;
        for (const auto& e : train) {
            const double y = to_int(e.y);
            const double margin = y * (dot(w, e.x) + b);
            if (margin < 1.0) {
                hinge += 1.0 - margin;
                for (std::size_t i = 0; i < d; ++i) grad[i] -= y * e.x[i];
                grad_b -= y;
            }
        }
        double norm2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            grad[i] = grad[i] / n + cfg.l2 * w[i];
            norm2 += w[i] * w[i];
        }
        grad_b /= n;
        return 0.5 * cfg.l2 * norm2 + hinge / n;
    };

    double grad_b = 0.0;
    objective_and_grad(grad_b);
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const double eta = cfg.step / std::sqrt(static_cast<double>(epoch));
        for (std::size_t i = 0; i < d; ++i) w[i] -= eta * grad[i];
        b -= eta * grad_b;

        const double obj = objective_and_grad(grad_b);
        if (!std::isfinite(obj)) {
            std::ostringstream msg;
            msg << "fit_linear_erm: non-finite loss at epoch " << epoch << " (step " << eta
                << ", bias " << b << ")";
            fail(ErrorKind::numeric, msg.str());
        }
        const bool usable = std::any_of(w.begin(), w.end(), [](double v) { return v != 0.0; });
        if (usable && obj < best_obj) {
            best_obj = obj;
            best_w = w;
            best_b = b;
        }
    }
    require(!best_w.empty(), ErrorKind::numeric,
            "fit_linear_erm: weights stayed at zero (features carry no signal)");
    return Classifier::linear(std::move(best_w), best_b);
}

double empirical_strategic_error(const Classifier& g, const CostSpec& c, const Dataset& ds) {
    require(!ds.empty(), ErrorKind::validation, "strategic error: empty dataset");
    std::size_t wrong = 0;
    for (const auto& e : ds) wrong += g.predict(best_response(g, c, e.x)) != e.y ? 1 : 0;
    return static_cast<double>(wrong) / static_cast<double>(ds.size());
}

std::vector<double> strategic_threshold_candidates(const Dataset& train, const CostSpec& c,
                                                   std::size_t axis) {
    require(c.dim() == train.dim(), ErrorKind::validation, "strategic ERM: cost dimension mismatch");
    require(axis < train.dim(), ErrorKind::validation, "strategic ERM: axis out of range");
    const double rate = c.rate(axis);
    std::vector<double> cands;
    cands.reserve(2 * train.size() + 2);
    cands.push_back(-kInf);
    cands.push_back(kInf);
    for (const auto& e : train) {
        cands.push_back(e.x[axis]);
        if (rate > 0.0) {
            const double shifted = e.x[axis] + 2.0 / rate;
            if (std::isfinite(shifted)) cands.push_back(shifted);
        }
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    return cands;
}

StrategicFit strategic_erm_threshold(const Dataset& train, const CostSpec& c, std::size_t axis) {
    require(!train.empty(), ErrorKind::validation, "strategic ERM: empty training set");
    const auto cands = strategic_threshold_candidates(train, c, axis);
    const auto pts = sorted_axis(train, axis);
    const auto prefix = positive_prefix(pts);
    const double rate = c.rate(axis);

    double best_value = cands.front();
    std::size_t best_err = std::numeric_limits<std::size_t>::max();
    for (double thr : cands) {
        const auto first = std::partition_point(pts.begin(), pts.end(), [&](const Point1d& p) {
            return !reaches_threshold(p.v, thr, rate);
        });
        const std::size_t err = cut_errors(prefix, static_cast<std::size_t>(first - pts.begin()));
        if (err < best_err) {
            best_err = err;
            best_value = thr;
        }
    }
    return StrategicFit{Classifier::threshold(axis, best_value),
                        static_cast<double>(best_err) / static_cast<double>(train.size())};
}

StrategicFit strategic_erm_linear(const Dataset& train, const CostSpec& c, const TrainConfig& cfg) {
    require(c.dim() == train.dim(), ErrorKind::validation, "strategic ERM: cost dimension mismatch");
    const Classifier direction = fit_linear_erm(train, cfg);

    // Drop components that could be gamed for free; otherwise every user
    // clears any bias at zero cost and the search degenerates.
    std::vector<double> w = direction.weights();
    const auto rates = c.rates();
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (rates[j] == 0.0 || w[j] < 0.0) w[j] = 0.0;
    }
    if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) {
        w.assign(w.size(), 0.0);
        w[budget_t(c).axis] = 1.0;
    }
    // Cheapest cost per unit of score; a point can gain 2 / rho for cost 2.
    double rho = kInf;
    for (std::size_t j = 0; j < w.size(); ++j)
        if (w[j] > 0.0) rho = std::min(rho, rates[j] / w[j]);
    const double reach = 2.0 / rho;

    std::vector<Point1d> pts;
    pts.reserve(train.size());
    for (const auto& e : train) pts.push_back({dot(w, e.x), e.y});
    std::stable_sort(pts.begin(), pts.end(), [](const Point1d& a, const Point1d& b) { return a.v < b.v; });
    const auto prefix = positive_prefix(pts);
    const std::size_t n = pts.size();

    // A point with score s ends up accepted iff s + b > -reach, so every
    // split of the sorted scores is one bias value. Ties go to accepting more.
    std::size_t best_cut = 0;
    std::size_t best_err = cut_errors(prefix, 0);
    for (std::size_t k = 1; k <= n; ++k) {
        if (k < n && pts[k].v == pts[k - 1].v) continue;
        const std::size_t err = cut_errors(prefix, k);
        if (err < best_err) {
            best_err = err;
            best_cut = k;
        }
    }
    double boundary;  // accepted iff score > boundary
    if (best_cut == 0) boundary = pts.front().v - 1.0;
    else if (best_cut == n) boundary = pts.back().v + 1.0;
    else boundary = pts[best_cut - 1].v + 0.5 * (pts[best_cut].v - pts[best_cut - 1].v);
    const double bias = -boundary - reach;

    Classifier g = Classifier::linear(std::move(w), bias);
    const double err = empirical_strategic_error(g, c, train);
    return StrategicFit{std::move(g), err};
}

StrategicFit strategic_erm(const Dataset& train, const CostSpec& c, const TrainConfig& cfg) {
    if (train.dim() == 1) return strategic_erm_threshold(train, c, 0);
    return strategic_erm_linear(train, c, cfg);
}

ResponseFunction ResponseFunction::identity() { return ResponseFunction{}; }

ResponseFunction ResponseFunction::fixed(Classifier believed) {
    ResponseFunction r;
    r.impl_ = std::move(believed);
    return r;
}

ResponseFunction ResponseFunction::table(Table lookup) {
    require(static_cast<bool>(lookup), ErrorKind::validation, "response function: empty table");
    ResponseFunction r;
    r.impl_ = std::move(lookup);
    return r;
}

std::optional<Classifier> ResponseFunction::operator()(const Classifier& g) const {
    if (std::holds_alternative<std::monostate>(impl_)) return g;
    if (const auto* fixed = std::get_if<Classifier>(&impl_)) return *fixed;
    return std::get<Table>(impl_)(g);
}

const Classifier* ResponseFunction::fixed_target() const noexcept {
    return std::get_if<Classifier>(&impl_);
}

StrategicFit r_strategic_erm(const Dataset& train, const CostSpec& c, const ResponseFunction& r,
                             std::size_t axis, const std::vector<double>& extra_candidates) {
    require(!train.empty(), ErrorKind::validation, "R-strategic ERM: empty training set");
    auto cands = strategic_threshold_candidates(train, c, axis);
    cands.insert(cands.end(), extra_candidates.begin(), extra_candidates.end());
    if (const Classifier* fixed = r.fixed_target(); fixed && fixed->is_threshold() &&
                                                    fixed->axis() == axis) {
        cands.push_back(fixed->threshold_value());
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    double best_value = cands.front();
    std::size_t best_err = std::numeric_limits<std::size_t>::max();
    for (double thr : cands) {
        const Classifier g = Classifier::threshold(axis, thr);
        const auto target = r(g);
        if (!target) fail(ErrorKind::contract, "R-strategic ERM: response undefined for " + g.describe());
        std::size_t err = 0;
        for (const auto& e : train) err += g.predict(best_response(*target, c, e.x)) != e.y ? 1 : 0;
        if (err < best_err) {
            best_err = err;
            best_value = thr;
        }
    }
    return StrategicFit{Classifier::threshold(axis, best_value),
                        static_cast<double>(best_err) / static_cast<double>(train.size())};
}

}  // namespace poplab
