#include "poplab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "poplab/error.hpp"
#include "poplab/parallel.hpp"

namespace poplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double strategic_error(const Classifier& f, const ResponsePolicy& policy, const CostSpec& c,
                       const Dataset& test) {
    require(!test.empty(), ErrorKind::validation, "strategic_error: empty test set");
    std::size_t wrong = 0;
    for (const auto& e : test) wrong += f.predict(respond(policy, c, e.x)) != e.y ? 1 : 0;
    return static_cast<double>(wrong) / static_cast<double>(test.size());
}

SetTags tag_point(const Classifier& f, const ContestantModel& believed, const CostSpec& c,
                  Label truth, const FeatureVector& x, double safety_k) {
    const Classifier& fhat = believed.classifier;
    const FeatureVector transparent = best_response(f, c, x);
    const FeatureVector dark = respond(policy_for(believed, safety_k), c, x);

    SetTags t;
    t.transparent_verdict = f.predict(transparent);
    t.dark_verdict = f.predict(dark);
    t.in_S = f.predict(x) != fhat.predict(x);
    t.in_E = t.transparent_verdict != t.dark_verdict;
    t.in_E_neg_pos = f.predict(dark) == Label::negative && fhat.predict(dark) == Label::positive &&
                     t.transparent_verdict == Label::positive;
    t.in_E_pos_neg = f.predict(transparent) == Label::positive &&
                     fhat.predict(transparent) == Label::negative && !(transparent == x) &&
                     dark == x;
    t.in_E_plus = t.in_E && truth == t.transparent_verdict;
    t.in_E_minus = t.in_E && truth == t.dark_verdict;
    return t;
}

PopCounts& PopCounts::operator+=(const PopCounts& o) {
    n += o.n;
    err_transparent += o.err_transparent;
    err_dark += o.err_dark;
    S += o.S;
    E += o.E;
    E_plus += o.E_plus;
    E_minus += o.E_minus;
    E_neg_pos += o.E_neg_pos;
    E_pos_neg += o.E_pos_neg;
    E_plus_positive += o.E_plus_positive;
    positives += o.positives;
    err_nonstrategic += o.err_nonstrategic;
    one_sided += o.one_sided;
    no_information += o.no_information;
    return *this;
}

double PopReport::err_transparent() const { return ratio(counts.err_transparent, counts.n); }
double PopReport::err_dark() const { return ratio(counts.err_dark, counts.n); }
double PopReport::pop() const {
    if (counts.n == 0) return 0.0;
    const auto diff = static_cast<std::int64_t>(counts.err_dark) - static_cast<std::int64_t>(counts.err_transparent);
    return static_cast<double>(diff) / static_cast<double>(counts.n);
}
double PopReport::pop_plus() const { return ratio(counts.E_plus, counts.n); }
double PopReport::pop_minus() const { return ratio(counts.E_minus, counts.n); }
double PopReport::eps2() const { return ratio(counts.S, counts.n); }
double PopReport::mass_E() const { return ratio(counts.E, counts.n); }
double PopReport::err_nonstrategic() const { return ratio(counts.err_nonstrategic, counts.n); }
double PopReport::inequity() const { return ratio(counts.E_plus_positive, counts.positives); }

bool PopReport::identities_hold() const noexcept {
    const auto dark = static_cast<std::int64_t>(counts.err_dark);
    const auto transparent = static_cast<std::int64_t>(counts.err_transparent);
    const auto plus = static_cast<std::int64_t>(counts.E_plus);
    const auto minus = static_cast<std::int64_t>(counts.E_minus);
    return dark - transparent == plus - minus &&
           static_cast<std::int64_t>(counts.E) == plus + minus;
}

PopCounts point_counts(const SetTags& t, const Example& e, Label truthful_verdict,
                       const ContestantModel& model) {
    PopCounts pc;
    pc.n = 1;
    pc.err_transparent = t.transparent_verdict != e.y;
    pc.err_dark = t.dark_verdict != e.y;
    pc.S = t.in_S;
    pc.E = t.in_E;
    pc.E_plus = t.in_E_plus;
    pc.E_minus = t.in_E_minus;
    pc.E_neg_pos = t.in_E_neg_pos;
    pc.E_pos_neg = t.in_E_pos_neg;
    pc.E_plus_positive = t.in_E_plus && e.y == Label::positive;
    pc.positives = e.y == Label::positive;
    pc.err_nonstrategic = truthful_verdict != e.y;
    pc.one_sided = model.one_sided;
    pc.no_information = model.no_information;
    return pc;
}

PopReport pop_report(const Classifier& f, const ModelProvider& provider, const CostSpec& c,
                     const Dataset& test, const PopOptions& opts) {
    require(static_cast<bool>(provider), ErrorKind::validation, "pop_report: no model provider");
    std::vector<SetTags> tags(test.size());
    std::vector<PopCounts> per_point(test.size());

    parallel_for(test.size(), opts.threads, [&](std::size_t i) {
        const Example& e = test[i];
        const ContestantModel model = provider(i, e);
        const SetTags t = tag_point(f, model, c, e.y, e.x, opts.safety_k);
        per_point[i] = point_counts(t, e, f.predict(e.x), model);
        tags[i] = t;
    });

    PopReport report;
    for (const auto& pc : per_point) report.counts += pc;
    if (opts.keep_tags) report.tags = std::move(tags);
    return report;
}

bool sufficient_condition(double mass_E, double err_star, double eps1) {
    return mass_E > 2.0 * err_star + 2.0 * eps1;
}

Interval enlargement_interval_1d(double t_f, double t_fhat, double t) {
    require(t > 0.0, ErrorKind::validation, "enlargement interval: t must be > 0");
    if (t_f == t_fhat) return Interval{0.0, 0.0, true};
    if (t_f > t_fhat) return Interval{t_f - t, t_f, false};
    return Interval{t_f - t, t_fhat - t, false};
}

void validate(const TheoryParams& p) {
    require(std::isfinite(p.alpha), ErrorKind::validation, "theory: alpha must be finite");
    require(p.sigma > 0.0 && std::isfinite(p.sigma), ErrorKind::validation, "theory: sigma must be > 0");
    require(p.t > 0.0 && std::isfinite(p.t), ErrorKind::validation, "theory: t must be > 0");
    require(std::isfinite(p.t_f) && std::isfinite(p.t_fhat), ErrorKind::validation,
            "theory: thresholds must be finite");
    for (const auto& e : {p.eps1, p.eps2}) {
        if (e) require(*e >= 0.0 && *e <= 1.0, ErrorKind::validation, "theory: eps values lie in [0, 1]");
    }
    require(p.delta > 0.0 && p.delta < 1.0, ErrorKind::validation, "theory: delta lies in (0, 1)");
}

namespace {

// Standardized CDF on coordinates relative to alpha.
double cdf_rel(const TheoryParams& p, double rel) { return normal_cdf(rel / p.sigma); }

double mass_between(const TheoryParams& p, double lo, double hi) {
    return lo >= hi ? 0.0 : cdf_rel(p, hi) - cdf_rel(p, lo);
}

}  // namespace

double derived_eps1(const TheoryParams& p) {
    validate(p);
    return std::abs(cdf_rel(p, p.t_f - p.alpha - p.t) - 0.5);
}

double derived_eps2(const TheoryParams& p) {
    validate(p);
    return std::abs(cdf_rel(p, p.t_fhat - p.alpha) - cdf_rel(p, p.t_f - p.alpha));
}

ClosedFormPop closed_form_pop_1d(const TheoryParams& p) {
    validate(p);
    ClosedFormPop out;
    out.eps1 = p.eps1 ? *p.eps1 : derived_eps1(p);
    out.eps2 = p.eps2 ? *p.eps2 : derived_eps2(p);
    out.sigma0 = out.eps1 <= 0.0 ? kInf : (out.eps1 < 0.5 ? sigma0(p.t, out.eps1) : 0.0);

    const double tf = p.t_f - p.alpha;
    const double tfh = p.t_fhat - p.alpha;
    double upper = 0.0;
    if (tf < tfh) {
        out.branch = PopBranch::jury_lower;
        upper = tfh - p.t;
        out.pop = cdf_rel(p, upper) - cdf_rel(p, std::abs(p.t - tf));
    } else if (tf > tfh) {
        out.branch = PopBranch::jury_higher;
        upper = tf;
        out.pop = cdf_rel(p, upper) - cdf_rel(p, std::abs(p.t - tf));
    }
    out.in_regime = p.sigma < out.sigma0 && out.eps2 > 2.0 * out.eps1 && tf != tfh;
    // The expression assumes E ends at or above alpha and that the believed
    // threshold is within one budget of the Jury's.
    out.exact = out.branch == PopBranch::none || (upper >= 0.0 && upper <= tf);
    return out;
}

double population_pop_1d(const TheoryParams& p) {
    validate(p);
    const double tf = p.t_f - p.alpha;
    const double tfh = p.t_fhat - p.alpha;
    if (tf == tfh) return 0.0;
    const double lo = tf - p.t;
    // Past t_f a user is accepted without moving, so E never extends beyond it.
    const double hi = tf > tfh ? tf : std::min(tf, tfh - p.t);
    // Every point of E is accepted under transparency and rejected in the
    // dark, so it counts for POP where h = +1 and against it where h = -1.
    const double plus = mass_between(p, std::max(lo, 0.0), hi);
    const double minus = mass_between(p, lo, std::min(hi, 0.0));
    return plus - minus;
}

PopCondition pop_condition_1d(const TheoryParams& p, double err_star) {
    validate(p);
    require(err_star >= 0.0 && err_star <= 1.0, ErrorKind::validation, "theory: err_star lies in [0, 1]");
    const double eps1 = p.eps1 ? *p.eps1 : derived_eps1(p);
    const double eps2 = p.eps2 ? *p.eps2 : derived_eps2(p);
    const double tf = p.t_f - p.alpha;
    const double tfh = p.t_fhat - p.alpha;

    PopCondition out;
    out.threshold = 2.0 * err_star + 2.0 * eps1;
    if (tf > tfh) out.mass_E = mass_between(p, tf - p.t, tf);
    else if (tf < tfh) out.mass_E = mass_between(p, tf - p.t, std::min(tf, tfh - p.t));
    out.sufficient = tf != tfh && out.mass_E > out.threshold;

    const double s0 = eps1 <= 0.0 ? kInf : (eps1 < 0.5 ? sigma0(p.t, eps1) : 0.0);
    out.regime = tf < p.t && eps2 > 2.0 * eps1 && p.sigma < s0 && tf != tfh;
    out.necessary_iff_regime = out.mass_E > 2.0 * eps1;
    return out;
}

double sigma0(double t, double eps1) {
    require(t > 0.0, ErrorKind::validation, "sigma0: t must be > 0");
    require(eps1 > 0.0 && eps1 < 0.5, ErrorKind::validation, "sigma0: eps1 must lie in (0, 0.5)");
    // 0.5 + eps1 can round to 1 when eps1 is within an ulp of 0.5; the
    // quantile is then infinite and sigma0 collapses to 0.
    const double p = 0.5 + eps1;
    if (p >= 1.0) return 0.0;
    return 0.5 * t / standard_normal_quantile(p);
}

double eps1_bound(std::size_t n, double delta) {
    require(n >= 1, ErrorKind::validation, "eps1_bound: n must be at least 1");
    require(delta > 0.0 && delta < 1.0, ErrorKind::validation, "eps1_bound: delta lies in (0, 1)");
    return std::sqrt(std::log(4.0 / delta) / static_cast<double>(n));
}

double generalization_bound(double d, std::size_t n, double delta, double C) {
    require(d > 0.0 && n >= 1 && C > 0.0, ErrorKind::validation, "bound: d, n, C must be positive");
    require(delta > 0.0 && delta < 1.0, ErrorKind::validation, "bound: delta lies in (0, 1)");
    auto rhs = [&](double eps) {
        const double inner = C * (d * std::log(d / eps) + std::log(1.0 / delta)) / static_cast<double>(n);
        return std::sqrt(std::max(0.0, inner));
    };
    double lo = 1e-300, hi = std::max(1.0, rhs(1.0));
    for (int i = 0; i < 2000 && hi - lo > 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid < rhs(mid)) lo = mid;
        else hi = mid;
    }
    return hi;
}

}  // namespace poplab
