#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "poplab/dataset.hpp"

namespace poplab {

// Separable linear cost c(x, u) = sum_i rate_i * max(0, u_i - x_i).
// Lowering a feature is free, and so is any motion on a zero-rate axis.
class CostSpec {
public:
    static CostSpec linear_separable(std::vector<double> rates);
    static CostSpec scalar(double scale) { return linear_separable({scale}); }

    std::size_t dim() const noexcept { return rates_.size(); }
    std::span<const double> rates() const noexcept { return rates_; }
    double rate(std::size_t axis) const { return rates_.at(axis); }
    bool is_free_axis(std::size_t axis) const { return rates_.at(axis) == 0.0; }

private:
    explicit CostSpec(std::vector<double> rates) : rates_(std::move(rates)) {}
    std::vector<double> rates_;
};

double cost_eval(const CostSpec& c, const FeatureVector& x, const FeatureVector& u);

struct BudgetT {
    double t = 0.0;
    std::size_t axis = 0;
};

// Largest movement along the cheapest cost-bearing axis that costs at most 2.
BudgetT budget_t(const CostSpec& c);

struct AdmissibilityWitness {
    FeatureVector x;
    FeatureVector y;
    std::vector<double> delta;
    double gap = 0.0;
};

struct AdmissibilityReport {
    bool invariant = true;
    bool feasible = true;
    std::size_t probes_checked = 0;
    std::vector<AdmissibilityWitness> violations;

    bool admissible() const noexcept { return invariant && feasible; }
};

// Checks c(x, x+d) == c(y, y+d) (to 1e-12) over consecutive probe pairs with
// displacements taken from the probe differences, and that a positive move
// along the budget axis costs at most 2.
AdmissibilityReport check_admissible(const CostSpec& c, std::span<const FeatureVector> probes);

}  // namespace poplab
