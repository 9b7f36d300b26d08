#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "poplab/rng.hpp"

namespace poplab {

// A point in feature space. Coordinates are always finite.
class FeatureVector {
public:
    FeatureVector() = default;
    explicit FeatureVector(std::vector<double> coords);
    FeatureVector(std::initializer_list<double> coords);

    static FeatureVector scalar(double x) { return FeatureVector{x}; }

    std::size_t size() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    double at(std::size_t i) const { return coords_.at(i); }

    // Replaces one coordinate; the new value must be finite.
    void set(std::size_t i, double value);

    std::span<const double> coords() const noexcept { return coords_; }
    auto begin() const noexcept { return coords_.begin(); }
    auto end() const noexcept { return coords_.end(); }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

private:
    std::vector<double> coords_;
};

enum class Label : std::int8_t { negative = -1, positive = 1 };

constexpr int to_int(Label y) noexcept { return static_cast<int>(y); }
constexpr Label label_of(bool positive) noexcept {
    return positive ? Label::positive : Label::negative;
}
constexpr Label flip(Label y) noexcept {
    return y == Label::positive ? Label::negative : Label::positive;
}

struct Example {
    FeatureVector x;
    Label y = Label::negative;
};

class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::size_t dim);
    Dataset(std::size_t dim, std::vector<Example> examples);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return examples_.size(); }
    bool empty() const noexcept { return examples_.empty(); }

    const Example& operator[](std::size_t i) const { return examples_[i]; }
    const std::vector<Example>& examples() const noexcept { return examples_; }
    auto begin() const noexcept { return examples_.begin(); }
    auto end() const noexcept { return examples_.end(); }

    void add(Example e);
    void reserve(std::size_t n) { examples_.reserve(n); }

    std::size_t count(Label y) const noexcept;

private:
    std::size_t dim_ = 0;
    std::vector<Example> examples_;
};

// Ground-truth labelers. All are closed on the positive side.
struct ThresholdLabeler {
    std::size_t axis = 0;
    double threshold = 0.0;
};

struct LinearLabeler {
    std::vector<double> weights;
    double bias = 0.0;
};

// Labels sign(w.x + b + noise_sd * z) with z standard normal, drawn per example.
struct NoisyLinearLabeler {
    std::vector<double> weights;
    double bias = 0.0;
    double noise_sd = 0.0;
};

// Mixture only: the label is fixed by which component generated the point.
struct ComponentLabeler {
    std::vector<Label> labels;
};

using Labeler = std::variant<ThresholdLabeler, LinearLabeler, NoisyLinearLabeler, ComponentLabeler>;

struct Gaussian1d {
    double mean = 0.0;
    double sd = 1.0;
    Labeler labeler = ThresholdLabeler{};
};

// Multivariate normal. `covariance` is row-major d x d; diagonal() builds the
// common independent case.
struct Mvn {
    std::vector<double> mean;
    std::vector<double> covariance;
    Labeler labeler = ThresholdLabeler{};

    static Mvn diagonal(std::vector<double> mean, const std::vector<double>& variances,
                        Labeler labeler);
    std::size_t dim() const noexcept { return mean.size(); }
};

struct Mixture1d {
    std::vector<double> centers;
    std::vector<double> weights;
    std::vector<double> sds;
    Labeler labeler = ComponentLabeler{};
};

using DistributionSpec = std::variant<Gaussian1d, Mvn, Mixture1d>;

std::size_t dim_of(const DistributionSpec& spec);

// Throws a validation error describing the first problem found.
void validate(const DistributionSpec& spec);

// Stateful sampler over a validated spec. Holds the Cholesky factor for Mvn.
class Sampler {
public:
    explicit Sampler(DistributionSpec spec);

    Example draw(Engine& rng) const;
    std::size_t dim() const noexcept { return dim_; }
    const DistributionSpec& spec() const noexcept { return spec_; }

private:
    DistributionSpec spec_;
    std::size_t dim_ = 0;
    std::vector<double> chol_;
};

Dataset synth_dataset(const DistributionSpec& spec, std::size_t n, SeedSpec seed);

// Reads a header row plus numeric rows. Labels may be -1/+1 or 0/1 (0 maps to
// -1). Errors carry the 1-based line number.
Dataset load_dataset_csv(const std::string& path, const std::string& label_column);
Dataset parse_dataset_csv(const std::string& text, const std::string& label_column,
                          const std::string& source_name = "<memory>");

std::vector<std::size_t> split_sizes(std::size_t n, std::span<const double> fractions);
// Shuffled row indices for each part; split_dataset materializes these.
std::vector<std::vector<std::size_t>> split_indices(std::size_t n, std::span<const double> fractions,
                                                    SeedSpec seed);
Dataset subset(const Dataset& ds, const std::vector<std::size_t>& rows);
std::vector<Dataset> split_dataset(const Dataset& ds, std::span<const double> fractions,
                                   SeedSpec seed);

struct Scaler {
    std::vector<double> mean;
    std::vector<double> sd;
    std::vector<bool> passthrough;

    FeatureVector apply(const FeatureVector& x) const;
    FeatureVector invert(const FeatureVector& z) const;
    Dataset apply(const Dataset& ds) const;
    Dataset invert(const Dataset& ds) const;
};

struct Standardized {
    Dataset train;
    std::vector<Dataset> others;
    Scaler scaler;
};

Scaler fit_scaler(const Dataset& train);
Standardized standardize(const Dataset& train, const std::vector<Dataset>& others);

}  // namespace poplab
