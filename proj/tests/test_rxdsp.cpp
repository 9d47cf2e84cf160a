#include <catch2/catch_amalgamated.hpp>

#include "spikelink/phy/channel.hpp"
#include "spikelink/phy/estimation.hpp"

using namespace spikelink;

TEST_CASE("LS estimate examples") {
    SECTION("noiseless gain 2") {
        auto est = ls_estimate({cplx{2.0, 0.0}}, {cplx{1.0, 0.0}});
        REQUIRE(est[0] == cplx{2.0, 0.0});
    }
    SECTION("y == x gives all ones") {
        std::vector<cplx> x{{1.0, 1.0}, {-0.5, 2.0}};
        auto est = ls_estimate(x, x);
        for (const auto& h : est) REQUIRE(std::abs(h - cplx{1.0, 0.0}) < 1e-15);
    }
    SECTION("zero pilot is a configuration error") {
        REQUIRE_THROWS_AS(ls_estimate({cplx{1.0, 0.0}}, {cplx{0.0, 0.0}}),
                          std::invalid_argument);
    }
}

TEST_CASE("LS pilot-point MSE equals 1/SNR") {
    // unit-power pilot, noise N0: estimate error variance is N0 = 1/SNR
    Rng rng(8);
    const double snr_db = 20.0;
    const double n0 = std::pow(10.0, -snr_db / 10.0);
    double mse = 0.0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        const cplx h = rng.cgaussian(1.0);
        const cplx pilot{1.0, 0.0};
        const cplx y = h * pilot + rng.cgaussian(n0);
        const auto est = ls_estimate({y}, {pilot});
        mse += std::norm(est[0] - h);
    }
    mse /= trials;
    REQUIRE(mse == Catch::Approx(1.0 / std::pow(10.0, snr_db / 10.0)).epsilon(0.2));
}

TEST_CASE("interpolation examples") {
    SECTION("midpoint") {
        auto est = interpolate({cplx{1.0, 0.0}, cplx{3.0, 0.0}}, {0, 8}, {4});
        REQUIRE(est[0] == cplx{2.0, 0.0});
    }
    SECTION("constant pilots stay constant everywhere") {
        auto est = interpolate({cplx{1.5, -0.5}, cplx{1.5, -0.5}}, {0, 10},
                               {1, 2, 3, 4, 5, 6, 7, 8, 9});
        for (const auto& h : est) REQUIRE(std::abs(h - cplx{1.5, -0.5}) < 1e-15);
    }
    SECTION("a data index on a pilot returns that pilot") {
        auto est = interpolate({cplx{1.0, 0.0}, cplx{5.0, 0.0}, cplx{9.0, 0.0}}, {0, 4, 8},
                               {4});
        REQUIRE(est[0] == cplx{5.0, 0.0});
    }
    SECTION("outside the pilot span the nearest pilot holds") {
        auto est = interpolate({cplx{2.0, 0.0}, cplx{4.0, 0.0}}, {3, 6}, {0, 1, 2, 7, 9});
        REQUIRE(est[0] == cplx{2.0, 0.0});
        REQUIRE(est[1] == cplx{2.0, 0.0});
        REQUIRE(est[2] == cplx{2.0, 0.0});
        REQUIRE(est[3] == cplx{4.0, 0.0});
        REQUIRE(est[4] == cplx{4.0, 0.0});
    }
    SECTION("fewer than two pilots is an error") {
        REQUIRE_THROWS_AS(interpolate({cplx{1.0, 0.0}}, {0}, {1}), std::invalid_argument);
    }
    SECTION("non-increasing pilot indices are rejected") {
        REQUIRE_THROWS_AS(interpolate({cplx{1.0, 0.0}, cplx{2.0, 0.0}}, {5, 5}, {1}),
                          std::invalid_argument);
    }
}

TEST_CASE("zero-forcing equalization") {
    SECTION("perfect estimate recovers the symbols") {
        std::vector<cplx> h{{0.5, 0.5}, {2.0, -1.0}};
        std::vector<cplx> x{{1.0, 0.0}, {0.0, 1.0}};
        std::vector<cplx> y{h[0] * x[0], h[1] * x[1]};
        auto eq = zf_equalize(y, h);
        REQUIRE(eq.erased_count() == 0);
        for (std::size_t i = 0; i < 2; ++i) REQUIRE(std::abs(eq.symbols[i] - x[i]) < 1e-12);
    }
    SECTION("unit estimate passes through") {
        std::vector<cplx> y{{0.3, -0.4}};
        auto eq = zf_equalize(y, {cplx{1.0, 0.0}});
        REQUIRE(eq.symbols[0] == y[0]);
    }
    SECTION("deep fade flags an erasure instead of blowing up") {
        auto eq = zf_equalize({cplx{1.0, 0.0}}, {cplx{1e-12, 0.0}});
        REQUIRE(eq.erased[0] == 1);
        REQUIRE(eq.symbols[0] == cplx{0.0, 0.0});
        REQUIRE(std::isfinite(eq.symbols[0].real()));
    }
}

TEST_CASE("noiseless chain is exact on a flat channel") {
    OfdmGrid grid(64, 9);
    Rng rng(21);
    const double pmax = 1.0;
    // flat random complex gain
    ChannelRealization ch;
    const cplx gain = rng.cgaussian(1.0);
    ch.taps = {gain};
    ch.freq_response.assign(grid.size(), gain);

    std::vector<cplx> data(64);
    for (auto& d : data) d = rng.cgaussian(1.0);
    auto frame = assemble_frame(grid, data, pmax);
    auto received = transmit(frame, ch, 0.0, rng);

    auto estimate = estimate_data_channel(grid, received, pmax);
    auto eq = zf_equalize(extract(received, grid.data_indices()), estimate);
    REQUIRE(eq.erased_count() == 0);
    for (std::size_t i = 0; i < data.size(); ++i)
        REQUIRE(std::abs(eq.symbols[i] - data[i]) < 1e-10);
}

TEST_CASE("estimation MSE scales like 1/SNR over the SNR grid") {
    OfdmGrid grid(64, 9);
    Rng rng(22);
    const double pmax = 1.0;
    double prev_mse = 1e9;
    for (double snr_db : {10.0, 20.0, 30.0}) {
        const double n0 = pmax / std::pow(10.0, snr_db / 10.0);
        double mse = 0.0;
        std::size_t count = 0;
        for (int trial = 0; trial < 400; ++trial) {
            ChannelRealization ch;
            const cplx gain = rng.cgaussian(1.0);
            ch.taps = {gain};
            ch.freq_response.assign(grid.size(), gain);
            OfdmFrame frame = assemble_frame(grid, std::vector<cplx>(64, cplx{0.0, 0.0}), pmax);
            auto received = transmit(frame, ch, n0, rng);
            auto estimate = estimate_data_channel(grid, received, pmax);
            for (const auto& h : estimate) {
                mse += std::norm(h - gain);
                ++count;
            }
        }
        mse /= static_cast<double>(count);
        // interior interpolation reduces noise, so the MSE sits below 1/SNR
        // but must track its slope decade by decade
        REQUIRE(mse < 1.05 / std::pow(10.0, snr_db / 10.0));
        REQUIRE(mse > 0.3 / std::pow(10.0, snr_db / 10.0));
        REQUIRE(mse < prev_mse * 0.2);
        prev_mse = mse;
    }
}
