#include "poplab/classifier.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "poplab/error.hpp"

namespace poplab {

Classifier Classifier::threshold(std::size_t axis, double value) {
    require(!std::isnan(value), ErrorKind::validation, "threshold classifier: NaN threshold");
    Classifier c;
    c.kind_ = Kind::threshold;
    c.axis_ = axis;
    c.threshold_ = value;
    return c;
}

Classifier Classifier::linear(std::vector<double> weights, double bias) {
    require(!weights.empty(), ErrorKind::validation, "linear classifier: no weights");
    bool nonzero = false;
    for (double w : weights) {
        require(std::isfinite(w), ErrorKind::validation, "linear classifier: non-finite weight");
        nonzero = nonzero || w != 0.0;
    }
    require(nonzero, ErrorKind::validation, "linear classifier: weights are all zero");
    require(std::isfinite(bias), ErrorKind::validation, "linear classifier: non-finite bias");
    Classifier c;
    c.kind_ = Kind::linear;
    c.weights_ = std::move(weights);
    c.bias_ = bias;
    return c;
}

Classifier Classifier::reject_all(std::size_t axis) {
    return threshold(axis, std::numeric_limits<double>::infinity());
}

Classifier Classifier::accept_all(std::size_t axis) {
    return threshold(axis, -std::numeric_limits<double>::infinity());
}

std::size_t Classifier::min_dim() const noexcept {
    return kind_ == Kind::threshold ? axis_ + 1 : weights_.size();
}

double Classifier::score(const FeatureVector& x) const {
    if (kind_ == Kind::threshold) {
        if (axis_ >= x.size()) {
            fail(ErrorKind::validation, "threshold classifier: axis " + std::to_string(axis_) +
                                            " out of range for d=" + std::to_string(x.size()));
        }
        return x[axis_] - threshold_;
    }
    if (weights_.size() != x.size()) {
        fail(ErrorKind::validation, "linear classifier: expected d=" + std::to_string(weights_.size()) +
                                        ", got " + std::to_string(x.size()));
    }
    double s = bias_;
    for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * x[i];
    return s;
}

std::string Classifier::describe() const {
    std::ostringstream out;
    if (kind_ == Kind::threshold) {
        out << "threshold(axis=" << axis_ << ", at=" << threshold_ << ")";
    } else {
        out << "linear(w=[";
        for (std::size_t i = 0; i < weights_.size(); ++i) out << (i ? "," : "") << weights_[i];
        out << "], b=" << bias_ << ")";
    }
    return out.str();
}

}  // namespace poplab
