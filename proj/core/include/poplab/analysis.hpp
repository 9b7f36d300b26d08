#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "poplab/classifier.hpp"
#include "poplab/cost.hpp"
#include "poplab/dataset.hpp"
#include "poplab/normal.hpp"
#include "poplab/response.hpp"

namespace poplab {

// Fraction of test points whose label disagrees with f's verdict after they
// respond according to `policy`.
double strategic_error(const Classifier& f, const ResponsePolicy& policy, const CostSpec& c,
                       const Dataset& test);

struct SetTags {
    bool in_S = false;        // f and the believed classifier disagree at x
    bool in_E = false;        // f's verdict depends on which classifier x responded to
    bool in_E_plus = false;   // in E and transparency gets the label right
    bool in_E_minus = false;  // in E and opacity gets the label right
    bool in_E_neg_pos = false;  // dark response lands where f = -1, believed = +1
    bool in_E_pos_neg = false;  // transparent move lands where f = +1, believed = -1
    Label transparent_verdict = Label::negative;  // f(best response to f)
    Label dark_verdict = Label::negative;         // f(response to the believed model)
};

// Computes membership from the definitions. The dark response is the best
// response to the contestant's model (safe response when safety_k > 0, no move
// without information). Without information the model's reject-all
// classifier stands in for the belief when deciding S.
SetTags tag_point(const Classifier& f, const ContestantModel& believed, const CostSpec& c,
                  Label truth, const FeatureVector& x, double safety_k = 0.0);

struct PopCounts {
    std::uint64_t n = 0;
    std::uint64_t err_transparent = 0;
    std::uint64_t err_dark = 0;
    std::uint64_t S = 0;
    std::uint64_t E = 0;
    std::uint64_t E_plus = 0;
    std::uint64_t E_minus = 0;
    std::uint64_t E_neg_pos = 0;
    std::uint64_t E_pos_neg = 0;
    std::uint64_t E_plus_positive = 0;     // E+ points with h = +1
    std::uint64_t positives = 0;           // test points with h = +1
    std::uint64_t err_nonstrategic = 0;    // errors when nobody moves
    std::uint64_t one_sided = 0;
    std::uint64_t no_information = 0;

    PopCounts& operator+=(const PopCounts& o);
};

// Counts contributed by one test point.
PopCounts point_counts(const SetTags& tags, const Example& e, Label truthful_verdict,
                       const ContestantModel& model);

struct PopReport {
    PopCounts counts;
    std::vector<SetTags> tags;  // per test point, in test order

    double err_transparent() const;
    double err_dark() const;
    double pop() const;
    double pop_plus() const;
    double pop_minus() const;
    double eps2() const;
    double mass_E() const;
    double err_nonstrategic() const;
    // Share of positive-labeled users who are accepted under transparency but
    // rejected in the dark.
    double inequity() const;

    // pop == pop_plus - pop_minus and mass_E == pop_plus + pop_minus, checked
    // on the integer counts.
    bool identities_hold() const noexcept;
};

using ModelProvider = std::function<ContestantModel(std::size_t index, const Example& e)>;

struct PopOptions {
    double safety_k = 0.0;
    bool keep_tags = false;
    std::size_t threads = 1;
};

// The provider is called once per test point and must be safe to call
// concurrently when threads > 1.
PopReport pop_report(const Classifier& f, const ModelProvider& provider, const CostSpec& c,
                     const Dataset& test, const PopOptions& opts = {});

bool sufficient_condition(double mass_E, double err_star, double eps1);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = false;

    bool contains(double x) const noexcept { return !empty && lo <= x && x < hi; }
};

// Enlargement set for 1D thresholds in the half-open form [lo, hi). Under the
// strict move rule the left endpoint itself does not move, so membership
// tests from tag_point differ from contains() at lo only.
Interval enlargement_interval_1d(double t_f, double t_fhat, double t);

struct TheoryParams {
    double alpha = 0.0;  // mean of the data, also h's threshold
    double sigma = 1.0;
    double t = 2.0;
    double t_f = 2.0;
    double t_fhat = 2.0;
    std::optional<double> eps1;  // derived from t_f when absent
    std::optional<double> eps2;  // derived from t_f, t_fhat when absent
    std::size_t n = 0;
    std::size_t m = 0;
    double delta = 0.05;
};

void validate(const TheoryParams& p);

// Strategic excess error of f over the optimum, and mass between the two
// thresholds, under N(alpha, sigma) with h realizable at alpha.
double derived_eps1(const TheoryParams& p);
double derived_eps2(const TheoryParams& p);

enum class PopBranch { none, jury_lower, jury_higher };

struct ClosedFormPop {
    double pop = 0.0;
    PopBranch branch = PopBranch::none;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double sigma0 = 0.0;  // +inf when eps1 == 0
    // sigma < sigma0, eps2 > 2 eps1, t_f != t_fhat
    bool in_regime = false;
    // The formula equals the exact population POP when the upper end of E is
    // at or above alpha and t_fhat - t <= t_f; true means both hold.
    bool exact = false;
};

ClosedFormPop closed_form_pop_1d(const TheoryParams& p);

// Exact population POP under strict moves, for any 1D parameters, by
// integrating the label over E. Used as the regime-free reference.
double population_pop_1d(const TheoryParams& p);

struct PopCondition {
    bool sufficient = false;
    bool necessary_iff_regime = false;  // P(E) > 2 eps1; meaningful only if regime
    bool regime = false;                // t_f < t, eps2 > 2 eps1, sigma < sigma0
    double mass_E = 0.0;
    double threshold = 0.0;             // 2 err_star + 2 eps1
};

PopCondition pop_condition_1d(const TheoryParams& p, double err_star = 0.0);

double sigma0(double t, double eps1);
double eps1_bound(std::size_t n, double delta);

// Fixed point of eps = sqrt(C (d ln(d / eps) + ln(1 / delta)) / n).
double generalization_bound(double d, std::size_t n, double delta, double C);

}  // namespace poplab
