#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "poplab/classifier.hpp"
#include "poplab/cost.hpp"

namespace poplab {

// Budget cap used by safe_response: the extended move stays this many cost
// units below 2 so the strict feasibility rule still holds.
inline constexpr double kSafeBudgetSlack = 1e-9;

// Utility-maximizing move against believed classifier g. A user moves only if
// some u with g(u) = +1 costs strictly less than 2; the move lands on the
// closest boundary point along the cheapest direction.
FeatureVector best_response(const Classifier& g, const CostSpec& c, const FeatureVector& x);

// Single-axis fast path shared by the learners so their candidate sweeps use
// the exact same acceptance rule as best_response.
inline bool reaches_threshold(double x, double threshold, double rate) noexcept {
    if (x >= threshold) return true;
    return rate * (threshold - x) < 2.0;
}

// Box around x, given as per-axis offsets, scanned at `step`.
struct GridSpec {
    std::vector<double> lower;
    std::vector<double> upper;
    double step = 1e-3;

    static GridSpec cube(std::size_t dim, double half_width, double step);
};

// Exhaustive oracle: argmax of g(u) - c(x,u) over the grid anchored at x.
// x wins ties, remaining ties go to the lexicographically smallest point.
FeatureVector best_response_bruteforce(const Classifier& g, const CostSpec& c,
                                       const FeatureVector& x, const GridSpec& grid);

// Best response extended along the same ray by k extra cost units, capped at
// 2 - kSafeBudgetSlack total. Free moves (zero cost) are returned unchanged.
FeatureVector safe_response(const Classifier& g, const CostSpec& c, const FeatureVector& x,
                            double k);

struct Truthful {};
struct BestResponse {
    Classifier believed;
};
struct SafeResponse {
    Classifier believed;
    double k = 0.0;
};

using ResponsePolicy = std::variant<Truthful, BestResponse, SafeResponse>;

FeatureVector respond(const ResponsePolicy& policy, const CostSpec& c, const FeatureVector& x);

// Policy for a contestant model: truthful without information, otherwise a
// best (or safe, if k > 0) response to the believed classifier.
ResponsePolicy policy_for(const ContestantModel& model, double safety_k = 0.0);

}  // namespace poplab
