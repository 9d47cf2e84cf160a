#include <catch2/catch_amalgamated.hpp>

#include "spikelink/phy/power.hpp"

using namespace spikelink;

TEST_CASE("dynamic schedule hand examples") {
    SECTION("b = 1 is uniform at pmax") {
        auto s = dynamic_schedule(0.7, 5, 1.0);
        for (double p : s) REQUIRE(p == Catch::Approx(0.7));
    }
    SECTION("T=2, b=2, pmax=1") {
        auto s = dynamic_schedule(1.0, 2, 2.0);
        REQUIRE(s[0] == Catch::Approx(4.0 / 3.0));
        REQUIRE(s[1] == Catch::Approx(2.0 / 3.0));
    }
    SECTION("budget holds with equality for arbitrary (T, b)") {
        for (std::size_t slots : {1, 2, 4, 7, 16}) {
            for (double b : {1.0, 1.4, 2.0, 100.0}) {
                auto s = dynamic_schedule(2.5, slots, b);
                double mean = 0.0;
                for (double p : s) mean += p;
                mean /= static_cast<double>(slots);
                REQUIRE(std::abs(mean - 2.5) <= 2.5 * 1e-12);
            }
        }
    }
    SECTION("decay is monotone non-increasing over slots") {
        auto s = dynamic_schedule(1.0, 6, 1.4);
        for (std::size_t t = 1; t < s.size(); ++t) REQUIRE(s[t] <= s[t - 1]);
    }
}

TEST_CASE("enforce per-block average") {
    SECTION("all-zero frame is unchanged") {
        std::vector<std::complex<double>> x(8, {0.0, 0.0});
        const double scale = enforce(x, PowerMode::per_block_average, 1.0);
        REQUIRE(scale == 1.0);
        for (const auto& v : x) REQUIRE(v == std::complex<double>{0.0, 0.0});
    }
    SECTION("sparse frame is boosted to the budget with equality") {
        std::vector<std::complex<double>> x(8, {0.0, 0.0});
        x[2] = {0.1, 0.0};
        enforce(x, PowerMode::per_block_average, 2.0);
        double total = 0.0;
        for (const auto& v : x) total += std::norm(v);
        REQUIRE(total / 8.0 == Catch::Approx(2.0));
    }
    SECTION("a full constant-modulus frame already at budget is unchanged") {
        std::vector<std::complex<double>> x(4, {1.0, 1.0});  // |x|^2 = 2 each
        enforce(x, PowerMode::per_block_average, 2.0);
        for (const auto& v : x) REQUIRE(std::abs(v - std::complex<double>{1.0, 1.0}) < 1e-12);
    }
}

TEST_CASE("enforce peak") {
    std::vector<std::complex<double>> x{{2.0, 0.0}, {0.5, 0.0}, {0.0, 0.0}};
    enforce(x, PowerMode::peak, 1.0);  // first symbol has power 4 = 4 * p_t
    REQUIRE(std::norm(x[0]) == Catch::Approx(1.0));
    REQUIRE(x[0].real() == Catch::Approx(1.0));  // scale factor 1/2
    REQUIRE(x[1] == std::complex<double>{0.5, 0.0});
    REQUIRE(x[2] == std::complex<double>{0.0, 0.0});
    REQUIRE(satisfies(x, PowerMode::peak, 1.0));
}

TEST_CASE("satisfies reports violations") {
    std::vector<std::complex<double>> x{{2.0, 0.0}};
    REQUIRE_FALSE(satisfies(x, PowerMode::peak, 1.0));
    REQUIRE(satisfies(x, PowerMode::peak, 4.0));
    REQUIRE_FALSE(satisfies(x, PowerMode::per_block_average, 3.9 / 1.0 * 0.99));
    REQUIRE(satisfies(x, PowerMode::per_block_average, 4.0));
}

TEST_CASE("mode parsing round-trips") {
    REQUIRE(power_mode_from_string("block") == PowerMode::per_block_average);
    REQUIRE(power_mode_from_string("peak") == PowerMode::peak);
    REQUIRE(to_string(PowerMode::peak) == "peak");
    REQUIRE_THROWS_AS(power_mode_from_string("nope"), std::invalid_argument);
}
