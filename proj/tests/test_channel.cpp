#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "spikelink/phy/channel.hpp"

using namespace spikelink;

TEST_CASE("single tap gives a flat response") {
    Rng rng(1);
    auto ch = draw_channel(1, 64, rng);
    for (const auto& h : ch.freq_response)
        REQUIRE(std::abs(h - ch.taps[0]) < 1e-12);
}

TEST_CASE("tap energy is normalized to unit mean") {
    Rng rng(2);
    const int draws = 100000;
    double acc = 0.0;
    for (int i = 0; i < draws; ++i) {
        auto ch = draw_channel(5, 1, rng);
        for (const auto& t : ch.taps) acc += std::norm(t);
    }
    REQUIRE(acc / draws == Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("fixed seed reproduces the channel") {
    Rng a(42), b(42);
    auto ca = draw_channel(5, 32, a);
    auto cb = draw_channel(5, 32, b);
    for (std::size_t i = 0; i < ca.taps.size(); ++i) REQUIRE(ca.taps[i] == cb.taps[i]);
    for (std::size_t i = 0; i < ca.freq_response.size(); ++i)
        REQUIRE(ca.freq_response[i] == cb.freq_response[i]);
}

TEST_CASE("noiseless identity channel is transparent") {
    Rng rng(3);
    ChannelRealization ch;
    ch.taps = {cplx{1.0, 0.0}};
    ch.freq_response.assign(16, cplx{1.0, 0.0});
    OfdmFrame frame(16);
    for (std::size_t i = 0; i < 16; ++i) frame.symbols[i] = cplx{0.1 * i, -0.2 * i};
    auto rx = transmit(frame, ch, 0.0, rng);
    for (std::size_t i = 0; i < 16; ++i) REQUIRE(rx.symbols[i] == frame.symbols[i]);
}

TEST_CASE("noiseless arbitrary channel divides out exactly") {
    Rng rng(4);
    auto ch = draw_channel(3, 24, rng);
    OfdmFrame frame(24);
    for (std::size_t i = 0; i < 24; ++i) frame.symbols[i] = cplx{1.0, 1.0};
    auto rx = transmit(frame, ch, 0.0, rng);
    for (std::size_t i = 0; i < 24; ++i)
        REQUIRE(std::abs(rx.symbols[i] / ch.freq_response[i] - frame.symbols[i]) < 1e-12);
}

TEST_CASE("noise variance matches N0") {
    Rng rng(5);
    ChannelRealization ch;
    ch.freq_response.assign(1, cplx{1.0, 0.0});
    ch.taps = {cplx{1.0, 0.0}};
    OfdmFrame zero(1);
    const double n0 = 0.37;
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) acc += std::norm(transmit(zero, ch, n0, rng).symbols[0]);
    REQUIRE(acc / n == Catch::Approx(n0).epsilon(0.01));
}

TEST_CASE("no inter-carrier leakage") {
    Rng rng(6);
    auto ch = draw_channel(5, 32, rng);
    OfdmFrame frame(32);
    frame.symbols[7] = cplx{2.0, 0.0};
    auto rx = transmit(frame, ch, 0.0, rng);
    for (std::size_t i = 0; i < 32; ++i) {
        if (i == 7) continue;
        REQUIRE(std::abs(rx.symbols[i]) == 0.0);
    }
}

TEST_CASE("grid layout interleaves pilots every 8 data subcarriers") {
    OfdmGrid grid(512, 75);
    REQUIRE(grid.size() == 587);
    REQUIRE(grid.pilot_indices().size() == 75);
    REQUIRE(grid.data_indices().size() == 512);
    REQUIRE(grid.pilot_indices().front() == 0);
    REQUIRE(grid.pilot_indices()[1] == 9);
    // 64 interleaved pilots cover the data span; 11 sit at the band edge
    for (std::size_t i = 0; i < 11; ++i)
        REQUIRE(grid.pilot_indices()[64 + i] == 576 + i);
    // no overlap between data and pilots
    std::vector<int> seen(grid.size(), 0);
    for (auto i : grid.pilot_indices()) ++seen[i];
    for (auto i : grid.data_indices()) ++seen[i];
    for (int s : seen) REQUIRE(s == 1);
}

TEST_CASE("pilot symbols have the configured power and are reproducible") {
    OfdmGrid grid(64, 9);
    auto p1 = grid.pilot_symbols(2.0);
    auto p2 = grid.pilot_symbols(2.0);
    REQUIRE(p1.size() == 9);
    for (std::size_t i = 0; i < p1.size(); ++i) {
        REQUIRE(p1[i] == p2[i]);
        REQUIRE(std::norm(p1[i]) == Catch::Approx(2.0));
    }
}
