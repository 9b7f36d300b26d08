#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "poplab/error.hpp"
#include "poplab/learners.hpp"
#include "poplab/response.hpp"

using namespace poplab;

namespace {

Dataset line(std::initializer_list<std::pair<double, int>> pts) {
    Dataset ds(1);
    for (const auto& [x, y] : pts) ds.add({FeatureVector{x}, y > 0 ? Label::positive : Label::negative});
    return ds;
}

// Exhaustive reference: strategic error of every candidate threshold.
double best_strategic_error(const Dataset& ds, const CostSpec& c) {
    double best = 1.0;
    for (double thr : strategic_threshold_candidates(ds, c)) {
        best = std::min(best, empirical_strategic_error(Classifier::threshold(0, thr), c, ds));
    }
    return best;
}

}  // namespace

TEST_CASE("threshold ERM tie rules") {
    const Dataset ds = line({{0.0, -1}, {1.0, -1}, {3.0, 1}, {4.0, 1}});
    CHECK(fit_threshold_erm(ds, 0, TieRule::smallest).threshold_value() == 3.0);
    CHECK(fit_threshold_erm(ds, 0, TieRule::midpoint).threshold_value() == 2.0);
    CHECK(empirical_error(fit_threshold_erm(ds), ds) == 0.0);

    const Dataset all_pos = line({{0.0, 1}, {1.0, 1}});
    CHECK(fit_threshold_erm(all_pos).threshold_value() == -std::numeric_limits<double>::infinity());
    const Dataset all_neg = line({{0.0, -1}, {1.0, -1}});
    CHECK(fit_threshold_erm(all_neg).threshold_value() == std::numeric_limits<double>::infinity());
}

TEST_CASE("strategic ERM reaches the exhaustive optimum") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z;
    const CostSpec c = CostSpec::scalar(1.0);
    for (int k = 0; k < 30; ++k) {
        Dataset ds(1);
        for (int i = 0; i < 60; ++i) {
            const double x = z(rng);
            const bool flip = std::uniform_real_distribution<double>(0, 1)(rng) < 0.1;
            ds.add({FeatureVector{x}, label_of((x >= 0.0) != flip)});
        }
        const StrategicFit fit = strategic_erm_threshold(ds, c);
        REQUIRE(fit.error == doctest::Approx(best_strategic_error(ds, c)));
        REQUIRE(fit.error == doctest::Approx(empirical_strategic_error(fit.classifier, c, ds)));
    }
}

TEST_CASE("realizable 1D strategic ERM puts the threshold near h plus t") {
    const DistributionSpec spec = Gaussian1d{0.0, 1.0, ThresholdLabeler{0, 0.0}};
    const Dataset ds = synth_dataset(spec, 3000, SeedSpec{12, 0});
    const StrategicFit fit = strategic_erm(ds, CostSpec::scalar(1.0), TrainConfig{});
    CHECK(fit.error == 0.0);
    CHECK(fit.classifier.threshold_value() == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("R-strategic ERM with identity response equals strategic ERM") {
    const DistributionSpec spec = Gaussian1d{0.3, 1.2, ThresholdLabeler{0, 0.1}};
    const Dataset ds = synth_dataset(spec, 400, SeedSpec{13, 0});
    const CostSpec c = CostSpec::scalar(0.8);
    const StrategicFit a = strategic_erm_threshold(ds, c);
    const StrategicFit b = r_strategic_erm(ds, c, ResponseFunction::identity());
    CHECK(a.error == doctest::Approx(b.error));

    const auto fixed = ResponseFunction::fixed(Classifier::threshold(0, 1.0));
    REQUIRE(fixed.fixed_target() != nullptr);
    const StrategicFit r = r_strategic_erm(ds, c, fixed);
    // Everyone answers the fixed classifier, so each candidate is scored on
    // the same moved points.
    Dataset moved(1);
    for (const auto& e : ds) moved.add({best_response(*fixed.fixed_target(), c, e.x), e.y});
    auto candidates = strategic_threshold_candidates(ds, c);
    candidates.push_back(1.0);
    double best = 1.0;
    for (double thr : candidates) best = std::min(best, empirical_error(Classifier::threshold(0, thr), moved));
    CHECK(r.error == doctest::Approx(best));

    const auto undefined = ResponseFunction::table([](const Classifier&) { return std::optional<Classifier>{}; });
    CHECK_THROWS_AS(r_strategic_erm(ds, c, undefined), Error);
}

TEST_CASE("linear ERM separates separable data and is sign-symmetric") {
    const DistributionSpec spec = Mvn::diagonal({0.0, 0.0}, {1.0, 1.0}, LinearLabeler{{1.0, 1.0}, 0.0});
    const Dataset ds = synth_dataset(spec, 500, SeedSpec{14, 0});
    const Classifier g = fit_linear_erm(ds, TrainConfig{});
    CHECK(empirical_error(g, ds) < 0.05);

    Dataset flipped(2);
    for (const auto& e : ds) flipped.add({e.x, flip(e.y)});
    const Classifier h = fit_linear_erm(flipped, TrainConfig{});
    for (std::size_t j = 0; j < 2; ++j) CHECK(h.weights()[j] == doctest::Approx(-g.weights()[j]));
    CHECK(h.bias() == doctest::Approx(-g.bias()));
}

TEST_CASE("linear strategic ERM is accurate under transparency") {
    const DistributionSpec spec = Mvn::diagonal({0.0, 0.0}, {1.0, 1.0}, LinearLabeler{{1.0, 0.5}, 0.0});
    const Dataset ds = synth_dataset(spec, 1000, SeedSpec{15, 0});
    const CostSpec c = CostSpec::linear_separable({1.0, 1.0});
    const StrategicFit fit = strategic_erm_linear(ds, c, TrainConfig{});
    CHECK(fit.error == doctest::Approx(empirical_strategic_error(fit.classifier, c, ds)));
    CHECK(fit.error < 0.1);
}

TEST_CASE("contestant sampling") {
    const Sampler sampler(Gaussian1d{0.0, 1.0, ThresholdLabeler{0, 0.0}});
    const Classifier f = Classifier::threshold(0, 0.5);

    const auto s = contestant_sample_set(FreshDraws{&sampler}, f, 8, SeedSpec{1, 0});
    CHECK(s.samples.size() == 8);
    CHECK_FALSE(s.one_sided);
    for (const auto& e : s.samples) CHECK(e.y == f.predict(e.x));
    const auto again = contestant_sample_set(FreshDraws{&sampler}, f, 8, SeedSpec{1, 0});
    for (std::size_t i = 0; i < 8; ++i) CHECK(again.samples[i].x == s.samples[i].x);

    // Nothing above 50 standard deviations: two-class sampling must give up.
    const Classifier far = Classifier::threshold(0, 50.0);
    try {
        contestant_sample_set(FreshDraws{&sampler}, far, 4, SeedSpec{1, 0}, {true, 20});
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::sampling);
    }
    const auto lax = contestant_sample_set(FreshDraws{&sampler}, far, 4, SeedSpec{1, 0}, {false, 20});
    CHECK(lax.one_sided);
    const ContestantModel model = contestant_fit(lax.samples, Family::threshold, TrainConfig{});
    CHECK(model.one_sided);
    CHECK(model.classifier.predict(FeatureVector{1e6}) == Label::negative);

    const ContestantModel none = contestant_fit(Dataset(1), Family::threshold, TrainConfig{});
    CHECK(none.no_information);
}

TEST_CASE("social graph neighbourhoods") {
    // 0 - 1 - 2 - 3, plus isolated 4
    const SocialGraph g(5, {{0, 1}, {1, 2}, {2, 3}}, {0, 1, 2, 3, 4});
    CHECK(g.neighbourhood(0, 1) == std::vector<std::size_t>{1});
    CHECK(g.neighbourhood(0, 2) == std::vector<std::size_t>{1, 2});
    CHECK(g.neighbourhood(1, 2) == std::vector<std::size_t>{0, 2, 3});
    CHECK(g.neighbourhood(4, 2).empty());
    CHECK_THROWS_AS(SocialGraph(2, {{0, 5}}, {0, 1}), Error);

    const SocialGraph r = random_social_graph(1000, 1.5, SeedSpec{2, 0});
    std::size_t degree = 0;
    for (std::size_t u = 0; u < r.users(); ++u) degree += r.neighbours(u).size();
    CHECK(static_cast<double>(degree) / 1000.0 == doctest::Approx(1.5).epsilon(0.05));
}
