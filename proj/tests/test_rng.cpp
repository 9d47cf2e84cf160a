#include <catch2/catch_amalgamated.hpp>

#include "spikelink/rng.hpp"

using namespace spikelink;

TEST_CASE("seeded streams reproduce exactly") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("derived seeds differ across stream ids") {
    REQUIRE(derive_seed(1, 0) != derive_seed(1, 1));
    REQUIRE(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
    REQUIRE(derive_seed(1) != derive_seed(2));
}

TEST_CASE("gaussian moments") {
    Rng rng(7);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.gaussian();
        sum += x;
        sq += x * x;
    }
    REQUIRE(std::abs(sum / n) < 0.01);
    REQUIRE(sq / n == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("complex gaussian variance") {
    Rng rng(9);
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) acc += std::norm(rng.cgaussian(0.25));
    REQUIRE(acc / n == Catch::Approx(0.25).epsilon(0.02));
}

TEST_CASE("below is within bounds and roughly uniform") {
    Rng rng(11);
    std::vector<int> counts(10, 0);
    for (int i = 0; i < 100000; ++i) ++counts[rng.below(10)];
    for (int c : counts) REQUIRE(std::abs(c - 10000) < 500);
}
