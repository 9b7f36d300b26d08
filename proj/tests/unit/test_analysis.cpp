#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "poplab/analysis.hpp"
#include "poplab/error.hpp"

using namespace poplab;

namespace {

TheoryParams example(double t_f, double t_fhat, double sigma = 0.5) {
    TheoryParams p;
    p.alpha = 0.0;
    p.sigma = sigma;
    p.t = 2.0;
    p.t_f = t_f;
    p.t_fhat = t_fhat;
    return p;
}

}  // namespace

TEST_CASE("normal cdf against the series oracle") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(std::abs(normal_cdf(1.0) - 0.841344746068543) < 1e-12);
    CHECK(std::abs(normal_cdf(-3.0) - 0.00134989803163009) < 1e-14);
    CHECK(std::abs(normal_cdf(2.5) - 0.993790334674224) < 1e-12);
    CHECK(std::abs(normal_cdf(-7.0) / 1.27981254388584e-12 - 1.0) < 1e-10);
    CHECK(std::abs(normal_cdf(0.3) - 0.617911422188953) < 1e-12);
    double prev = 0.0;
    for (double x = -9.0; x <= 9.0; x += 0.01) {
        const double v = normal_cdf(x);
        REQUIRE(std::abs(v - oracle::normal_cdf(x)) < 1e-7);
        REQUIRE(std::abs(v + normal_cdf(-x) - 1.0) < 1e-12);
        REQUIRE(v >= prev);
        prev = v;
    }
    CHECK(normal_cdf(2.0, 1.0, 2.0) == doctest::Approx(normal_cdf(0.5)));
}

TEST_CASE("normal quantile inverts the cdf") {
    for (double p : {0.01, 0.2, 0.5, 0.6, 0.975}) {
        CHECK(std::abs(normal_cdf(standard_normal_quantile(p)) - p) < 1e-9);
    }
    CHECK_THROWS_AS(standard_normal_quantile(1.0), Error);
}

TEST_CASE("sigma0 and the eps1 bound") {
    CHECK(sigma0(2.0, 0.1) == doctest::Approx(3.94715387554275).epsilon(1e-8));
    const double s = sigma0(2.0, 0.1);
    CHECK(std::abs(normal_cdf(1.0, 0.0, s) - 0.6) <= 1e-9);
    CHECK(sigma0(2.0, 1e-6) > 1e5);
    CHECK_THROWS_AS(sigma0(2.0, 0.5), Error);
    CHECK(eps1_bound(1000, 0.05) == doctest::Approx(0.0661968778317670).epsilon(1e-12));
    CHECK(eps1_bound(100000000, 0.05) < 1e-3);
}

TEST_CASE("generalization bound is a fixed point") {
    const double eps = generalization_bound(3.0, 5000, 0.05, 1.0);
    const double rhs = std::sqrt((3.0 * std::log(3.0 / eps) + std::log(1.0 / 0.05)) / 5000.0);
    CHECK(eps == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("closed-form POP examples") {
    const ClosedFormPop a = closed_form_pop_1d(example(1.8, 2.5));
    CHECK(a.pop == doctest::Approx(0.185923004458219).epsilon(1e-10));
    CHECK(a.branch == PopBranch::jury_lower);
    CHECK(a.exact);
    const ClosedFormPop b = closed_form_pop_1d(example(2.2, 1.9));
    CHECK(b.pop == doctest::Approx(0.344572845845768).epsilon(1e-10));
    CHECK(b.branch == PopBranch::jury_higher);
    const ClosedFormPop c = closed_form_pop_1d(example(2.0, 2.0 + 1e-9));
    CHECK(std::abs(c.pop) < 1e-8);
    CHECK(closed_form_pop_1d(example(2.0, 2.0)).branch == PopBranch::none);

    // Where the formula is exact it equals the population integral.
    for (const auto& p : {example(1.8, 2.5), example(2.2, 1.9), example(2.0, 2.7, 1.0)}) {
        CHECK(population_pop_1d(p) == doctest::Approx(closed_form_pop_1d(p).pop).epsilon(1e-12));
    }
}

TEST_CASE("E stops at the Jury's threshold") {
    // The believed threshold is more than one budget above f's, so users
    // past t_f stay put and keep their acceptance.
    TheoryParams p;
    p.sigma = 1.2;
    p.t = 1.0;
    p.t_f = 0.5;
    p.t_fhat = 3.5;
    CHECK_FALSE(closed_form_pop_1d(p).exact);

    const Classifier f = Classifier::threshold(0, p.t_f);
    const auto fhat = ContestantModel::informed(Classifier::threshold(0, p.t_fhat));
    const CostSpec c = CostSpec::scalar(2.0 / p.t);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> draw(0.0, p.sigma);
    const int n = 200000;
    long long count = 0;
    for (int i = 0; i < n; ++i) {
        const double x = draw(rng);
        const Label y = label_of(x >= 0.0);
        const SetTags t = tag_point(f, fhat, c, y, FeatureVector{x});
        count += t.in_E_plus;
        count -= t.in_E_minus;
    }
    CHECK(std::abs(population_pop_1d(p) - static_cast<double>(count) / n) < 0.005);
    CHECK(pop_condition_1d(p).mass_E ==
          doctest::Approx(oracle::normal_cdf(0.5 / 1.2) - oracle::normal_cdf(-0.5 / 1.2)));
}

TEST_CASE("POP conditions") {
    CHECK(sufficient_condition(0.3, 0.0, 0.05));
    CHECK_FALSE(sufficient_condition(0.1, 0.0, 0.05));

    TheoryParams p = example(1.8, 2.5);
    p.eps1 = 0.0;
    const PopCondition cond = pop_condition_1d(p);
    CHECK(cond.sufficient);
    CHECK(population_pop_1d(p) > 0.0);

    const PopCondition flat = pop_condition_1d(example(2.0, 2.0));
    CHECK_FALSE(flat.sufficient);
    CHECK_FALSE(flat.regime);
}

TEST_CASE("enlargement interval") {
    const Interval a = enlargement_interval_1d(2.2, 1.9, 2.0);
    CHECK(a.lo == doctest::Approx(0.2));
    CHECK(a.hi == doctest::Approx(2.2));
    const Interval b = enlargement_interval_1d(1.8, 2.5, 2.0);
    CHECK(b.lo == doctest::Approx(-0.2));
    CHECK(b.hi == doctest::Approx(0.5));
    CHECK(enlargement_interval_1d(1.0, 1.0, 2.0).empty);
}

TEST_CASE("tagging a point in E") {
    const Classifier f = Classifier::threshold(0, 2.2);
    const auto fhat = ContestantModel::informed(Classifier::threshold(0, 1.9));
    const CostSpec c = CostSpec::scalar(1.0);
    const SetTags t = tag_point(f, fhat, c, Label::positive, FeatureVector{1.0});
    CHECK(t.in_E);
    CHECK(t.in_E_neg_pos);
    CHECK_FALSE(t.in_E_pos_neg);
    CHECK(t.in_E_plus);
    CHECK(t.transparent_verdict == Label::positive);
    CHECK(t.dark_verdict == Label::negative);

    // Interval agreement on a grid, left endpoint excused.
    const Interval iv = enlargement_interval_1d(2.2, 1.9, 2.0);
    for (int i = 0; i <= 10000; ++i) {
        const double x = -1.0 + 4.0 * i / 10000.0;
        if (x == iv.lo) continue;
        REQUIRE(tag_point(f, fhat, c, Label::positive, FeatureVector{x}).in_E == iv.contains(x));
    }

    const SetTags same = tag_point(f, ContestantModel::informed(f), c, Label::positive, FeatureVector{1.0});
    CHECK_FALSE(same.in_S);
    CHECK_FALSE(same.in_E);
}

TEST_CASE("pop reports") {
    const Dataset test = synth_dataset(Gaussian1d{0.0, 0.5, ThresholdLabeler{0, 0.0}}, 20000, SeedSpec{21, 0});
    const Classifier f = Classifier::threshold(0, 1.8);
    const CostSpec c = CostSpec::scalar(1.0);

    const PopReport same = pop_report(f, [&](std::size_t, const Example&) { return ContestantModel::informed(f); }, c, test);
    CHECK(same.pop() == 0.0);
    CHECK(same.counts.S == 0);
    CHECK(same.counts.E == 0);

    const auto fhat = ContestantModel::informed(Classifier::threshold(0, 2.5));
    const PopReport rep = pop_report(f, [&](std::size_t, const Example&) { return fhat; }, c, test, {0.0, true, 3});
    CHECK(rep.identities_hold());
    CHECK(rep.tags.size() == test.size());
    CHECK(rep.pop() == doctest::Approx(0.1859).epsilon(0.05));
    CHECK(rep.pop_minus() <= rep.err_transparent());
    CHECK(rep.err_transparent() == doctest::Approx(strategic_error(f, BestResponse{f}, c, test)));
    CHECK(rep.err_dark() == doctest::Approx(strategic_error(f, BestResponse{fhat.classifier}, c, test)));
    CHECK(rep.err_nonstrategic() == doctest::Approx(strategic_error(f, Truthful{}, c, test)));
}

TEST_CASE("strategic error examples") {
    const Dataset test = synth_dataset(Gaussian1d{0.0, 1.0, ThresholdLabeler{0, 0.0}}, 5000, SeedSpec{22, 0});
    const Classifier fstar = Classifier::threshold(0, 2.0);
    CHECK(strategic_error(fstar, BestResponse{fstar}, CostSpec::scalar(1.0), test) == 0.0);
    CHECK_THROWS_AS(strategic_error(fstar, Truthful{}, CostSpec::scalar(1.0), Dataset(1)), Error);
}
