#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "../oracles.hpp"
#include "poplab/classifier.hpp"
#include "poplab/cost.hpp"
#include "poplab/error.hpp"
#include "poplab/response.hpp"

using namespace poplab;

TEST_CASE("separable linear cost") {
    const CostSpec c = CostSpec::linear_separable({1.0, 0.5});
    CHECK(cost_eval(c, FeatureVector{0.0, 0.0}, FeatureVector{1.0, 2.0}) == doctest::Approx(2.0));
    CHECK(cost_eval(c, FeatureVector{0.0, 0.0}, FeatureVector{-3.0, -1.0}) == 0.0);
    CHECK_THROWS_AS(cost_eval(c, FeatureVector{0.0}, FeatureVector{1.0}), Error);
    CHECK_THROWS_AS(CostSpec::linear_separable({-1.0}), Error);
    try {
        CostSpec::linear_separable({0.0, 0.0});
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::admissibility);
    }
}

TEST_CASE("budget t is the reach along the cheapest axis") {
    const BudgetT b = budget_t(CostSpec::linear_separable({2.0, 0.0, 0.5}));
    CHECK(b.t == doctest::Approx(4.0));
    CHECK(b.axis == 2);
    CHECK(budget_t(CostSpec::scalar(1.0)).t == doctest::Approx(2.0));
}

TEST_CASE("separable costs pass the admissibility probe") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    std::vector<FeatureVector> probes;
    for (int i = 0; i < 50; ++i) probes.push_back(FeatureVector{z(rng), z(rng), z(rng)});
    const auto report = check_admissible(CostSpec::linear_separable({1.0, 0.0, 3.0}), probes);
    CHECK(report.admissible());
    CHECK(report.probes_checked > 0);
    CHECK(report.violations.empty());
}

TEST_CASE("classifier construction and prediction") {
    const Classifier t = Classifier::threshold(0, 1.5);
    CHECK(t.predict(FeatureVector{1.5}) == Label::positive);
    CHECK(t.predict(FeatureVector{1.4999}) == Label::negative);
    CHECK(Classifier::reject_all().predict(FeatureVector{1e300}) == Label::negative);
    CHECK(Classifier::accept_all().predict(FeatureVector{-1e300}) == Label::positive);
    CHECK_THROWS_AS(Classifier::threshold(0, std::nan("")), Error);
    CHECK_THROWS_AS(Classifier::linear({0.0, 0.0}, 1.0), Error);
    const Classifier l = Classifier::linear({1.0, -2.0}, 0.5);
    CHECK(l.score(FeatureVector{1.0, 1.0}) == doctest::Approx(-0.5));
    CHECK(l.predict(FeatureVector{1.0, 0.75}) == Label::positive);
}

TEST_CASE("1D best response matches a grid search") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3.0, 3.0), r(0.5, 3.0);
    for (int k = 0; k < 300; ++k) {
        const double thr = u(rng), rate = r(rng), x = u(rng);
        const FeatureVector moved = best_response(Classifier::threshold(0, thr), CostSpec::scalar(rate), FeatureVector{x});
        const double expect = oracle::best_response_1d_grid(thr, rate, x);
        // The grid lands up to one step past the threshold.
        REQUIRE(std::abs(moved[0] - expect) <= 2e-4);
    }
}

TEST_CASE("moves costing exactly 2 are not taken") {
    const Classifier g = Classifier::threshold(0, 2.0);
    const CostSpec c = CostSpec::scalar(1.0);
    CHECK(best_response(g, c, FeatureVector{0.0})[0] == 0.0);
    CHECK(best_response(g, c, FeatureVector{0.0001})[0] == 2.0);
    CHECK(best_response(g, c, FeatureVector{2.5})[0] == 2.5);
}

TEST_CASE("2D best response agrees with the brute-force oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> w(0.3, 2.0), b(-1.5, 1.5), x(-1.0, 1.0);
    const CostSpec c = CostSpec::linear_separable({1.0, 2.0});
    const GridSpec grid = GridSpec::cube(2, 2.1, 0.01);
    for (int k = 0; k < 25; ++k) {
        const Classifier g = Classifier::linear({w(rng), w(rng)}, b(rng));
        const FeatureVector p{x(rng), x(rng)};
        const FeatureVector fast = best_response(g, c, p);
        const FeatureVector slow = best_response_bruteforce(g, c, p, grid);
        // Same verdict, and both moves (if any) stay under budget; the grid
        // point can only be costlier by its resolution.
        REQUIRE(g.predict(fast) == g.predict(slow));
        CHECK(cost_eval(c, p, fast) <= cost_eval(c, p, slow) + 0.03);
        CHECK(cost_eval(c, p, fast) < 2.0);
    }
}

TEST_CASE("free axes make any linear boundary reachable") {
    const CostSpec c = CostSpec::linear_separable({1.0, 0.0});
    const Classifier g = Classifier::linear({1.0, 0.01}, -100.0);
    const FeatureVector moved = best_response(g, c, FeatureVector{0.0, 0.0});
    CHECK(g.predict(moved) == Label::positive);
    CHECK(moved[0] == 0.0);
    CHECK(cost_eval(c, FeatureVector{0.0, 0.0}, moved) == 0.0);
}

TEST_CASE("best response lands on the boundary when the score has large terms") {
    const CostSpec c = CostSpec::linear_separable({1.0, 1.0});
    const Classifier g = Classifier::linear({0.715655, 1.33947}, 0.503922);
    const FeatureVector x{-1e-17, -0.9};
    const FeatureVector moved = best_response(g, c, x);
    CHECK(g.predict(moved) == Label::positive);
    CHECK(cost_eval(c, x, moved) < 2.0);
}

TEST_CASE("safe response extends the move by k cost units") {
    const Classifier g = Classifier::threshold(0, 1.0);
    const CostSpec c = CostSpec::scalar(1.0);
    CHECK(safe_response(g, c, FeatureVector{0.0}, 0.2)[0] == doctest::Approx(1.2));
    // Capped just under the budget.
    const double capped = safe_response(g, c, FeatureVector{0.0}, 1.5)[0];
    CHECK(capped < 2.0);
    CHECK(capped > 2.0 - 1e-6);
    // No move, no extension.
    CHECK(safe_response(g, c, FeatureVector{-5.0}, 0.2)[0] == -5.0);
    CHECK(safe_response(g, c, FeatureVector{3.0}, 0.2)[0] == 3.0);
    CHECK_THROWS_AS(safe_response(g, c, FeatureVector{0.0}, -0.1), Error);
}

TEST_CASE("policy selection") {
    const ContestantModel none{Classifier::reject_all(), false, true};
    CHECK(std::holds_alternative<Truthful>(policy_for(none)));
    const auto informed = ContestantModel::informed(Classifier::threshold(0, 1.0));
    CHECK(std::holds_alternative<BestResponse>(policy_for(informed)));
    CHECK(std::holds_alternative<SafeResponse>(policy_for(informed, 0.02)));
    CHECK(respond(Truthful{}, CostSpec::scalar(1.0), FeatureVector{0.5})[0] == 0.5);
}
