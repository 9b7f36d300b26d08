#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "poplab/dataset.hpp"

namespace poplab {

// Either a positive-above threshold on one axis or an affine rule w.x + b.
// predict() is +1 iff score >= 0, so the positive region is closed.
// Threshold values may be +-infinity (reject-all / accept-all).
class Classifier {
public:
    enum class Kind { threshold, linear };

    static Classifier threshold(std::size_t axis, double value);
    static Classifier linear(std::vector<double> weights, double bias);
    static Classifier reject_all(std::size_t axis = 0);
    static Classifier accept_all(std::size_t axis = 0);

    Kind kind() const noexcept { return kind_; }
    bool is_threshold() const noexcept { return kind_ == Kind::threshold; }

    std::size_t axis() const noexcept { return axis_; }
    double threshold_value() const noexcept { return threshold_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double bias() const noexcept { return bias_; }

    // Smallest dimension this classifier can be applied to.
    std::size_t min_dim() const noexcept;

    double score(const FeatureVector& x) const;
    Label predict(const FeatureVector& x) const { return label_of(score(x) >= 0.0); }

    std::string describe() const;

    friend bool operator==(const Classifier&, const Classifier&) = default;

private:
    Kind kind_ = Kind::threshold;
    std::size_t axis_ = 0;
    double threshold_ = 0.0;
    std::vector<double> weights_;
    double bias_ = 0.0;
};

// What a contestant ended up believing. `no_information` means the sample set
// was empty: such a user reports truthfully. `one_sided` marks an extreme
// threshold fitted to single-class samples.
struct ContestantModel {
    Classifier classifier = Classifier::reject_all();
    bool one_sided = false;
    bool no_information = false;

    static ContestantModel informed(Classifier c) { return {std::move(c), false, false}; }
};

}  // namespace poplab
