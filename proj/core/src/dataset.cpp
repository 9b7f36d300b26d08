#include "poplab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "poplab/error.hpp"

namespace poplab {

namespace {

void require_finite(double v, const char* where) {
    if (!std::isfinite(v)) fail(ErrorKind::validation, std::string(where) + ": non-finite coordinate");
}

}  // namespace

FeatureVector::FeatureVector(std::vector<double> coords) : coords_(std::move(coords)) {
    for (double v : coords_) require_finite(v, "FeatureVector");
}

FeatureVector::FeatureVector(std::initializer_list<double> coords) : coords_(coords) {
    for (double v : coords_) require_finite(v, "FeatureVector");
}

void FeatureVector::set(std::size_t i, double value) {
    require_finite(value, "FeatureVector::set");
    coords_.at(i) = value;
}

Dataset::Dataset(std::size_t dim) : dim_(dim) {
    require(dim >= 1, ErrorKind::validation, "Dataset: dimension must be at least 1");
}

Dataset::Dataset(std::size_t dim, std::vector<Example> examples) : Dataset(dim) {
    for (const auto& e : examples) {
        if (e.x.size() != dim_) {
            fail(ErrorKind::validation, "Dataset: example of dimension " + std::to_string(e.x.size()) +
                                            " in a dataset of dimension " + std::to_string(dim_));
        }
    }
    examples_ = std::move(examples);
}

void Dataset::add(Example e) {
    if (e.x.size() != dim_) {
        fail(ErrorKind::validation,
             "Dataset::add: dimension " + std::to_string(e.x.size()) + ", expected " + std::to_string(dim_));
    }
    examples_.push_back(std::move(e));
}

std::size_t Dataset::count(Label y) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(examples_.begin(), examples_.end(), [y](const Example& e) { return e.y == y; }));
}

Mvn Mvn::diagonal(std::vector<double> mean, const std::vector<double>& variances, Labeler labeler) {
    const std::size_t d = mean.size();
    std::vector<double> cov(d * d, 0.0);
    for (std::size_t i = 0; i < d && i < variances.size(); ++i) cov[i * d + i] = variances[i];
    if (variances.size() != d) cov.clear();  // rejected by validate()
    return Mvn{std::move(mean), std::move(cov), std::move(labeler)};
}

std::size_t dim_of(const DistributionSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::size_t {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Mvn>) return s.dim();
            else return 1;
        },
        spec);
}

namespace {

void validate_labeler(const Labeler& labeler, std::size_t dim, std::size_t components) {
    std::visit(
        [&](const auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ThresholdLabeler>) {
                require(l.axis < dim, ErrorKind::validation, "labeler: threshold axis out of range");
                require(std::isfinite(l.threshold), ErrorKind::validation,
                        "labeler: threshold must be finite");
            } else if constexpr (std::is_same_v<T, LinearLabeler> ||
                                 std::is_same_v<T, NoisyLinearLabeler>) {
                require(l.weights.size() == dim, ErrorKind::validation,
                        "labeler: weight count does not match dimension");
                require(std::any_of(l.weights.begin(), l.weights.end(),
                                    [](double w) { return w != 0.0; }),
                        ErrorKind::validation, "labeler: weights are all zero");
                if constexpr (std::is_same_v<T, NoisyLinearLabeler>) {
                    require(l.noise_sd >= 0.0 && std::isfinite(l.noise_sd), ErrorKind::validation,
                            "labeler: noise_sd must be finite and >= 0");
                }
            } else {
                require(components > 0, ErrorKind::validation,
                        "labeler: component labels need a mixture");
                require(l.labels.size() == components, ErrorKind::validation,
                        "labeler: one label per mixture component required");
            }
        },
        labeler);
}

// Lower-triangular L with L L^T = cov.
std::vector<double> cholesky(const std::vector<double>& cov, std::size_t d) {
    std::vector<double> L(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = cov[i * d + j];
            for (std::size_t k = 0; k < j; ++k) s -= L[i * d + k] * L[j * d + k];
            if (i == j) {
                require(s > 0.0, ErrorKind::validation, "mvn: covariance is not positive definite");
                L[i * d + i] = std::sqrt(s);
            } else {
                L[i * d + j] = s / L[j * d + j];
            }
        }
    }
    return L;
}

Label apply_labeler(const Labeler& labeler, const std::vector<double>& x, std::size_t component,
                    Engine& rng) {
    return std::visit(
        [&](const auto& l) -> Label {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ThresholdLabeler>) {
                return label_of(x[l.axis] >= l.threshold);
            } else if constexpr (std::is_same_v<T, LinearLabeler>) {
                double s = l.bias;
                for (std::size_t i = 0; i < x.size(); ++i) s += l.weights[i] * x[i];
                return label_of(s >= 0.0);
            } else if constexpr (std::is_same_v<T, NoisyLinearLabeler>) {
                double s = l.bias;
                for (std::size_t i = 0; i < x.size(); ++i) s += l.weights[i] * x[i];
                std::normal_distribution<double> noise(0.0, 1.0);
                s += l.noise_sd * noise(rng);
                return label_of(s >= 0.0);
            } else {
                return l.labels[component];
            }
        },
        labeler);
}

}  // namespace

void validate(const DistributionSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Gaussian1d>) {
                require(std::isfinite(s.mean), ErrorKind::validation, "gaussian1d: mean must be finite");
                require(s.sd > 0.0 && std::isfinite(s.sd), ErrorKind::validation,
                        "gaussian1d: sd must be > 0");
                validate_labeler(s.labeler, 1, 0);
            } else if constexpr (std::is_same_v<T, Mvn>) {
                const std::size_t d = s.dim();
                require(d >= 1, ErrorKind::validation, "mvn: empty mean vector");
                require(s.covariance.size() == d * d, ErrorKind::validation,
                        "mvn: covariance must be d x d");
                for (std::size_t i = 0; i < d; ++i) {
                    require(std::isfinite(s.mean[i]), ErrorKind::validation, "mvn: non-finite mean");
                    require(s.covariance[i * d + i] > 0.0, ErrorKind::validation,
                            "mvn: covariance diagonal entries must be > 0");
                    for (std::size_t j = 0; j < i; ++j) {
                        const double a = s.covariance[i * d + j], b = s.covariance[j * d + i];
                        require(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)),
                                ErrorKind::validation, "mvn: covariance must be symmetric");
                    }
                }
                cholesky(s.covariance, d);
                validate_labeler(s.labeler, d, 0);
            } else {
                const std::size_t k = s.centers.size();
                require(k >= 1, ErrorKind::validation, "mixture1d: no components");
                require(s.weights.size() == k && s.sds.size() == k, ErrorKind::validation,
                        "mixture1d: centers, weights and sds must have equal length");
                double total = 0.0;
                for (std::size_t i = 0; i < k; ++i) {
                    require(std::isfinite(s.centers[i]), ErrorKind::validation,
                            "mixture1d: non-finite center");
                    require(s.weights[i] >= 0.0, ErrorKind::validation,
                            "mixture1d: negative weight");
                    require(s.sds[i] > 0.0 && std::isfinite(s.sds[i]), ErrorKind::validation,
                            "mixture1d: sd must be > 0");
                    total += s.weights[i];
                }
                require(std::abs(total - 1.0) <= 1e-9, ErrorKind::validation,
                        "mixture1d: weights must sum to 1");
                validate_labeler(s.labeler, 1, k);
            }
        },
        spec);
}

Sampler::Sampler(DistributionSpec spec) : spec_(std::move(spec)) {
    validate(spec_);
    dim_ = dim_of(spec_);
    if (const auto* mvn = std::get_if<Mvn>(&spec_)) chol_ = cholesky(mvn->covariance, dim_);
}

Example Sampler::draw(Engine& rng) const {
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> x(dim_);
    std::size_t component = 0;
    const Labeler* labeler = nullptr;

    if (const auto* g = std::get_if<Gaussian1d>(&spec_)) {
        x[0] = g->mean + g->sd * z(rng);
        labeler = &g->labeler;
    } else if (const auto* mvn = std::get_if<Mvn>(&spec_)) {
        std::vector<double> e(dim_);
        for (auto& v : e) v = z(rng);
        for (std::size_t i = 0; i < dim_; ++i) {
            double s = mvn->mean[i];
            for (std::size_t k = 0; k <= i; ++k) s += chol_[i * dim_ + k] * e[k];
            x[i] = s;
        }
        labeler = &mvn->labeler;
    } else {
        const auto& mix = std::get<Mixture1d>(spec_);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double r = u(rng);
        double acc = 0.0;
        component = mix.weights.size() - 1;
        for (std::size_t i = 0; i < mix.weights.size(); ++i) {
            acc += mix.weights[i];
            if (r < acc) {
                component = i;
                break;
            }
        }
        x[0] = mix.centers[component] + mix.sds[component] * z(rng);
        labeler = &mix.labeler;
    }
    const Label y = apply_labeler(*labeler, x, component, rng);
    return Example{FeatureVector(std::move(x)), y};
}

Dataset synth_dataset(const DistributionSpec& spec, std::size_t n, SeedSpec seed) {
    require(n >= 1, ErrorKind::validation, "synth_dataset: n must be at least 1");
    const Sampler sampler(spec);
    Engine rng = seed.engine();
    Dataset ds(sampler.dim());
    ds.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ds.add(sampler.draw(rng));
    return ds;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string_view rest = line;
    while (true) {
        const auto comma = rest.find(',');
        out.push_back(trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

bool parse_double(const std::string& s, double& out) {
    std::string_view v = s;
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    if (v.empty()) return false;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    return res.ec == std::errc() && res.ptr == v.data() + v.size() && std::isfinite(out);
}

}  // namespace

Dataset parse_dataset_csv(const std::string& text, const std::string& label_column,
                          const std::string& source_name) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    auto where = [&] { return source_name + ":" + std::to_string(line_no) + ": "; };

    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split_row(line);
            break;
        }
    }
    require(!header.empty(), ErrorKind::parse, source_name + ": missing header row");
    const auto label_it = std::find(header.begin(), header.end(), label_column);
    require(label_it != header.end(), ErrorKind::parse,
            where() + "label column '" + label_column + "' not in header");
    const auto label_idx = static_cast<std::size_t>(label_it - header.begin());
    require(header.size() >= 2, ErrorKind::parse, where() + "need at least one feature column");

    Dataset ds(header.size() - 1);
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        require(cells.size() == header.size(), ErrorKind::parse,
                where() + "expected " + std::to_string(header.size()) + " fields, found " +
                    std::to_string(cells.size()));
        std::vector<double> x;
        x.reserve(header.size() - 1);
        Label y = Label::negative;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double v = 0.0;
            if (!parse_double(cells[i], v)) {
                fail(ErrorKind::parse, where() + "non-numeric value '" + cells[i] + "' in column '" +
                                           header[i] + "'");
            }
            if (i == label_idx) {
                if (v == 1.0) y = Label::positive;
                else if (v == -1.0 || v == 0.0) y = Label::negative;
                else fail(ErrorKind::parse, where() + "unknown label value '" + cells[i] + "'");
            } else {
                x.push_back(v);
            }
        }
        ds.add(Example{FeatureVector(std::move(x)), y});
    }
    return ds;
}

Dataset load_dataset_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open dataset '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset_csv(buf.str(), label_column, path);
}

std::vector<std::size_t> split_sizes(std::size_t n, std::span<const double> fractions) {
    require(!fractions.empty(), ErrorKind::validation, "split: no fractions given");
    double total = 0.0;
    for (double f : fractions) {
        require(f > 0.0 && std::isfinite(f), ErrorKind::validation, "split: fractions must be positive");
        total += f;
    }
    require(std::abs(total - 1.0) <= 1e-9, ErrorKind::validation, "split: fractions must sum to 1");

    std::vector<std::size_t> sizes(fractions.size());
    std::size_t used = 0;
    for (std::size_t i = 0; i + 1 < fractions.size(); ++i) {
        sizes[i] = static_cast<std::size_t>(std::floor(static_cast<double>(n) * fractions[i]));
        used += sizes[i];
    }
    require(used <= n, ErrorKind::validation, "split: fractions exceed dataset size");
    sizes.back() = n - used;
    return sizes;
}

std::vector<std::vector<std::size_t>> split_indices(std::size_t n, std::span<const double> fractions,
                                                    SeedSpec seed) {
    const auto sizes = split_sizes(n, fractions);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Engine rng = seed.engine();
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<std::size_t>> parts;
    parts.reserve(sizes.size());
    auto next = order.begin();
    for (std::size_t size : sizes) {
        parts.emplace_back(next, next + static_cast<std::ptrdiff_t>(size));
        next += static_cast<std::ptrdiff_t>(size);
    }
    return parts;
}

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& rows) {
    Dataset out(ds.dim());
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        require(r < ds.size(), ErrorKind::validation, "subset: row out of range");
        out.add(ds[r]);
    }
    return out;
}

std::vector<Dataset> split_dataset(const Dataset& ds, std::span<const double> fractions,
                                   SeedSpec seed) {
    std::vector<Dataset> parts;
    for (const auto& rows : split_indices(ds.size(), fractions, seed)) parts.push_back(subset(ds, rows));
    return parts;
}

FeatureVector Scaler::apply(const FeatureVector& x) const {
    require(x.size() == mean.size(), ErrorKind::validation, "scaler: dimension mismatch");
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = passthrough[i] ? x[i] : (x[i] - mean[i]) / sd[i];
    return FeatureVector(std::move(z));
}

FeatureVector Scaler::invert(const FeatureVector& z) const {
    require(z.size() == mean.size(), ErrorKind::validation, "scaler: dimension mismatch");
    std::vector<double> x(z.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = passthrough[i] ? z[i] : z[i] * sd[i] + mean[i];
    return FeatureVector(std::move(x));
}

Dataset Scaler::apply(const Dataset& ds) const {
    Dataset out(ds.dim());
    out.reserve(ds.size());
    for (const auto& e : ds) out.add(Example{apply(e.x), e.y});
    return out;
}

Dataset Scaler::invert(const Dataset& ds) const {
    Dataset out(ds.dim());
    out.reserve(ds.size());
    for (const auto& e : ds) out.add(Example{invert(e.x), e.y});
    return out;
}

Scaler fit_scaler(const Dataset& train) {
    require(!train.empty(), ErrorKind::validation, "standardize: empty training set");
    const std::size_t d = train.dim();
    const double n = static_cast<double>(train.size());
    Scaler s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), std::vector<bool>(d, false)};
    for (const auto& e : train)
        for (std::size_t i = 0; i < d; ++i) s.mean[i] += e.x[i];
    for (auto& m : s.mean) m /= n;
    for (const auto& e : train) {
        for (std::size_t i = 0; i < d; ++i) {
            const double dev = e.x[i] - s.mean[i];
            s.sd[i] += dev * dev;
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        s.sd[i] = std::sqrt(s.sd[i] / n);
        if (s.sd[i] <= 1e-12 * std::max(1.0, std::abs(s.mean[i]))) {
            s.passthrough[i] = true;
        }
    }
    return s;
}

Standardized standardize(const Dataset& train, const std::vector<Dataset>& others) {
    Scaler scaler = fit_scaler(train);
    Standardized out{scaler.apply(train), {}, scaler};
    out.others.reserve(others.size());
    for (const auto& ds : others) out.others.push_back(scaler.apply(ds));
    return out;
}

}  // namespace poplab
