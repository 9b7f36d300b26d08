#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "poplab/dataset.hpp"
#include "poplab/error.hpp"

using namespace poplab;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::runtime;
}

}  // namespace

TEST_CASE("feature vectors reject non-finite coordinates") {
    CHECK_THROWS_AS(FeatureVector({1.0, std::nan("")}), Error);
    CHECK_THROWS_AS(FeatureVector({std::numeric_limits<double>::infinity()}), Error);
    FeatureVector v{1.0, 2.0};
    CHECK_THROWS_AS(v.set(0, std::nan("")), Error);
    v.set(1, 5.0);
    CHECK(v[1] == 5.0);
}

TEST_CASE("datasets enforce a single dimension") {
    Dataset ds(2);
    ds.add({FeatureVector{1.0, 2.0}, Label::positive});
    CHECK_THROWS_AS(ds.add({FeatureVector{1.0}, Label::negative}), Error);
    CHECK(ds.count(Label::positive) == 1);
}

TEST_CASE("csv parsing") {
    const Dataset ds = parse_dataset_csv("a,label,b\n1,1,2\n3,0,4\n5,-1,6\n", "label");
    REQUIRE(ds.size() == 3);
    CHECK(ds.dim() == 2);
    CHECK(ds[0].x == FeatureVector{1.0, 2.0});
    CHECK(ds[0].y == Label::positive);
    CHECK(ds[1].y == Label::negative);
    CHECK(ds[2].y == Label::negative);

    SUBCASE("bad number names the line") {
        try {
            parse_dataset_csv("a,label\n1,1\nx,1\n", "label");
            FAIL("no error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::parse);
            CHECK(std::string(e.what()).find(":3:") != std::string::npos);
        }
    }
    SUBCASE("other failures") {
        CHECK(kind_of([] { parse_dataset_csv("a,b\n1,2\n", "label"); }) == ErrorKind::parse);
        CHECK(kind_of([] { parse_dataset_csv("a,label\n1,2\n", "label"); }) == ErrorKind::parse);
        CHECK(kind_of([] { parse_dataset_csv("a,label\n1\n", "label"); }) == ErrorKind::parse);
        CHECK(kind_of([] { load_dataset_csv("/nonexistent/file.csv", "label"); }) == ErrorKind::io);
    }
}

TEST_CASE("split sizes") {
    const std::vector<double> f{0.7, 0.15, 0.15};
    CHECK(split_sizes(20222, f) == std::vector<std::size_t>{14155, 3033, 3034});
    const std::vector<double> g{0.8, 0.2};
    CHECK(split_sizes(5000, g) == std::vector<std::size_t>{4000, 1000});
    const std::vector<double> bad{0.5, 0.6};
    CHECK_THROWS_AS(split_sizes(10, bad), Error);
}

TEST_CASE("split indices form a permutation and depend only on the seed") {
    const std::vector<double> f{0.6, 0.4};
    const auto a = split_indices(101, f, SeedSpec{7, 0});
    const auto b = split_indices(101, f, SeedSpec{7, 0});
    CHECK(a == b);
    std::vector<std::size_t> all(a[0]);
    all.insert(all.end(), a[1].begin(), a[1].end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expect(101);
    std::iota(expect.begin(), expect.end(), std::size_t{0});
    CHECK(all == expect);
    CHECK_FALSE(split_indices(101, f, SeedSpec{8, 0}) == a);
}

TEST_CASE("scaler standardizes with train statistics and passes constants through") {
    Dataset train(2);
    train.add({FeatureVector{1.0, 5.0}, Label::positive});
    train.add({FeatureVector{3.0, 5.0}, Label::negative});
    const Scaler s = fit_scaler(train);
    CHECK(s.mean[0] == doctest::Approx(2.0));
    CHECK(s.sd[0] == doctest::Approx(1.0));
    CHECK(s.passthrough[1]);
    const FeatureVector z = s.apply(FeatureVector{3.0, 7.0});
    CHECK(z[0] == doctest::Approx(1.0));
    CHECK(z[1] == doctest::Approx(7.0));
    const FeatureVector back = s.invert(z);
    CHECK(back[0] == doctest::Approx(3.0));
    CHECK(back[1] == doctest::Approx(7.0));
}

TEST_CASE("synthetic data is reproducible and follows the labeler") {
    const DistributionSpec spec = Gaussian1d{1.0, 2.0, ThresholdLabeler{0, 0.5}};
    const Dataset a = synth_dataset(spec, 2000, SeedSpec{3, 0});
    const Dataset b = synth_dataset(spec, 2000, SeedSpec{3, 0});
    REQUIRE(a.size() == 2000);
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].x == b[i].x);
        REQUIRE(a[i].y == label_of(a[i].x[0] >= 0.5));
        mean += a[i].x[0] / 2000.0;
    }
    CHECK(mean == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("mvn sampler reproduces the covariance") {
    Mvn spec;
    spec.mean = {0.0, 0.0};
    spec.covariance = {2.0, 0.8, 0.8, 1.0};
    spec.labeler = ThresholdLabeler{0, 0.0};
    const Dataset ds = synth_dataset(spec, 40000, SeedSpec{5, 0});
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& e : ds) {
        sxx += e.x[0] * e.x[0];
        sxy += e.x[0] * e.x[1];
        syy += e.x[1] * e.x[1];
    }
    const double n = static_cast<double>(ds.size());
    CHECK(sxx / n == doctest::Approx(2.0).epsilon(0.05));
    CHECK(sxy / n == doctest::Approx(0.8).epsilon(0.08));
    CHECK(syy / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("distribution validation") {
    Mvn asym;
    asym.mean = {0.0, 0.0};
    asym.covariance = {1.0, 0.5, 0.2, 1.0};
    CHECK_THROWS_AS(validate(DistributionSpec{asym}), Error);
    Mvn not_pd;
    not_pd.mean = {0.0, 0.0};
    not_pd.covariance = {1.0, 2.0, 2.0, 1.0};
    CHECK_THROWS_AS(Sampler(DistributionSpec{not_pd}), Error);
    CHECK_THROWS_AS(validate(DistributionSpec{Gaussian1d{0.0, -1.0, ThresholdLabeler{}}}), Error);
    Mixture1d mix{{0.0, 1.0}, {0.5, 0.6}, {1.0, 1.0}, ComponentLabeler{{Label::negative, Label::positive}}};
    CHECK_THROWS_AS(validate(DistributionSpec{mix}), Error);
}
