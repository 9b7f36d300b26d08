#include <doctest.h>

#include <atomic>
#include <set>
#include <stdexcept>
#include <vector>

#include "poplab/parallel.hpp"
#include "poplab/rng.hpp"

using namespace poplab;

TEST_CASE("child seeds are stable and distinct") {
    const SeedSpec root{42, 0};
    CHECK(root.child(3) == root.child(3));
    CHECK(root.child("data") == root.child("data"));
    CHECK_FALSE(root.child(3) == root.child(4));
    CHECK_FALSE(root.child("data") == root.child("split"));
    CHECK_FALSE(root.child(1).child(2) == root.child(2).child(1));

    auto a = root.child("x").engine();
    auto b = root.child("x").engine();
    for (int i = 0; i < 10; ++i) CHECK(a() == b());
}

TEST_CASE("master seed changes every stream") {
    CHECK_FALSE(SeedSpec{1, 0}.child(0) == SeedSpec{2, 0}.child(0));
    auto a = SeedSpec{1, 0}.engine();
    auto b = SeedSpec{2, 0}.engine();
    CHECK(a() != b());
}

TEST_CASE("parallel_for visits each index once for any thread count") {
    for (std::size_t threads : {1, 2, 3, 8}) {
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) REQUIRE(h == 1);
    }
    std::atomic<int> calls{0};
    parallel_for(0, 4, [&](std::size_t) { ++calls; });
    CHECK(calls == 0);
}

TEST_CASE("parallel_for rethrows worker exceptions") {
    CHECK_THROWS_AS(parallel_for(100, 4,
                                 [](std::size_t i) {
                                     if (i == 57) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("resolve_threads") {
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(0) >= 1);
}
