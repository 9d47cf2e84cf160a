#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spikelink/phy/ofdm.hpp"

namespace spikelink {

// Gray-mapped QPSK at per-symbol power P. Bit pair (b0, b1) maps to
//   ( (1-2*b0) * sqrt(P/2),  (1-2*b1) * sqrt(P/2) ),
// so 00 -> (+,+), 01 -> (+,-), 10 -> (-,+), 11 -> (-,-): b0 on I, b1 on Q.
inline std::vector<cplx> qpsk_map(const std::vector<std::uint8_t>& bits, double power) {
    if (bits.size() % 2 != 0) throw std::invalid_argument("QPSK needs an even bit count");
    const double a = std::sqrt(power / 2.0);
    std::vector<cplx> symbols(bits.size() / 2);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const double re = bits[2 * i] ? -a : a;
        const double im = bits[2 * i + 1] ? -a : a;
        symbols[i] = {re, im};
    }
    return symbols;
}

// Per-bit LLRs, positive for bit 0, from equalized symbols. noise_var is
// the post-equalization complex noise variance per symbol (N0 / |h|^2 for
// zero forcing); erased symbols produce LLR 0 for both bits.
inline std::vector<double> qpsk_soft_demap(const std::vector<cplx>& symbols,
                                           const std::vector<double>& noise_var,
                                           const std::vector<std::uint8_t>& erased,
                                           double power) {
    if (symbols.size() != noise_var.size() || symbols.size() != erased.size())
        throw std::invalid_argument("demap input length mismatch");
    const double a = std::sqrt(power / 2.0);
    std::vector<double> llrs(2 * symbols.size(), 0.0);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (erased[i]) continue;
        const double scale = 4.0 * a / std::max(noise_var[i], 1e-300);
        llrs[2 * i] = scale * symbols[i].real();
        llrs[2 * i + 1] = scale * symbols[i].imag();
    }
    return llrs;
}

// Minimum-distance hard decisions; erased symbols decide arbitrarily to 0.
inline std::vector<std::uint8_t> qpsk_hard_demap(const std::vector<cplx>& symbols) {
    std::vector<std::uint8_t> bits(2 * symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        bits[2 * i] = symbols[i].real() < 0.0 ? 1 : 0;
        bits[2 * i + 1] = symbols[i].imag() < 0.0 ? 1 : 0;
    }
    return bits;
}

}  // namespace spikelink
