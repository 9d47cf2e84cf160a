#include <catch2/catch_amalgamated.hpp>

#include "spikelink/modem/qpsk.hpp"
#include "spikelink/rng.hpp"

using namespace spikelink;

TEST_CASE("Gray map convention") {
    const double p = 2.0;
    const double a = 1.0;  // sqrt(p/2)
    auto s = qpsk_map({0, 0, 0, 1, 1, 0, 1, 1}, p);
    REQUIRE(s[0] == cplx{a, a});
    REQUIRE(s[1] == cplx{a, -a});
    REQUIRE(s[2] == cplx{-a, a});
    REQUIRE(s[3] == cplx{-a, -a});
}

TEST_CASE("per-symbol power is exactly P") {
    Rng rng(3);
    std::vector<std::uint8_t> bits(64);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
    const double p = 0.64;
    for (const auto& s : qpsk_map(bits, p)) REQUIRE(std::norm(s) == Catch::Approx(p));
}

TEST_CASE("odd bit count is rejected") {
    REQUIRE_THROWS_AS(qpsk_map({1}, 1.0), std::invalid_argument);
}

TEST_CASE("noiseless round-trip") {
    Rng rng(4);
    std::vector<std::uint8_t> bits(200);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
    auto symbols = qpsk_map(bits, 1.7);
    REQUIRE(qpsk_hard_demap(symbols) == bits);
}

TEST_CASE("soft demap signs follow the bits and erasures give zero") {
    std::vector<std::uint8_t> bits{0, 1, 1, 0};
    auto symbols = qpsk_map(bits, 1.0);
    std::vector<double> nv(symbols.size(), 0.1);
    std::vector<std::uint8_t> erased(symbols.size(), 0);
    erased[1] = 1;
    auto llrs = qpsk_soft_demap(symbols, nv, erased, 1.0);
    REQUIRE(llrs.size() == 4);
    REQUIRE(llrs[0] > 0.0);   // bit 0
    REQUIRE(llrs[1] < 0.0);   // bit 1
    REQUIRE(llrs[2] == 0.0);  // erased symbol
    REQUIRE(llrs[3] == 0.0);
}

TEST_CASE("LLR magnitude scales with confidence") {
    auto symbols = qpsk_map({0, 0}, 1.0);
    std::vector<std::uint8_t> erased{0};
    auto quiet = qpsk_soft_demap(symbols, {0.01}, erased, 1.0);
    auto loud = qpsk_soft_demap(symbols, {1.0}, erased, 1.0);
    REQUIRE(quiet[0] > loud[0]);
}

TEST_CASE("empirical uncoded BER matches the closed-form oracle") {
    // BER = Q(sqrt(SNR)) for Gray QPSK with per-symbol SNR = P/N0
    Rng rng(5);
    const double p = 1.0;
    const double snr_db = 6.0;
    const double n0 = p / std::pow(10.0, snr_db / 10.0);
    const int n_symbols = 100000;
    std::vector<std::uint8_t> bits(2 * n_symbols);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
    auto symbols = qpsk_map(bits, p);
    for (auto& s : symbols) s += rng.cgaussian(n0);
    auto hard = qpsk_hard_demap(symbols);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) errors += (hard[i] != bits[i]);
    const double ber = static_cast<double>(errors) / static_cast<double>(bits.size());
    const double oracle = 0.5 * std::erfc(std::sqrt(std::pow(10.0, snr_db / 10.0)) / std::sqrt(2.0));
    REQUIRE(ber == Catch::Approx(oracle).epsilon(0.1));
}
