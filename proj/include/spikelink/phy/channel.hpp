#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "spikelink/phy/ofdm.hpp"
#include "spikelink/rng.hpp"

namespace spikelink {

// One multipath realization: L time-domain taps plus the per-subcarrier
// frequency response (DFT of the zero-padded taps).
struct ChannelRealization {
    std::vector<cplx> taps;
    std::vector<cplx> freq_response;
};

// i.i.d. circular complex Gaussian taps with variance 1/L each, so the
// expected channel norm is 1 regardless of the path count.
inline ChannelRealization draw_channel(std::size_t paths, std::size_t subcarriers, Rng& rng) {
    if (paths == 0) throw std::invalid_argument("need at least one path");
    ChannelRealization ch;
    ch.taps.resize(paths);
    const double var = 1.0 / static_cast<double>(paths);
    for (auto& t : ch.taps) t = rng.cgaussian(var);
    ch.freq_response.resize(subcarriers);
    const double w0 = -2.0 * std::numbers::pi / static_cast<double>(subcarriers);
    for (std::size_t k = 0; k < subcarriers; ++k) {
        cplx h{0.0, 0.0};
        for (std::size_t l = 0; l < paths; ++l) {
            const double phi = w0 * static_cast<double>(k) * static_cast<double>(l);
            h += ch.taps[l] * cplx{std::cos(phi), std::sin(phi)};
        }
        ch.freq_response[k] = h;
    }
    return ch;
}

// Per-subcarrier narrowband model: y_i = H_i * x_i + w_i with w_i i.i.d.
// complex Gaussian of variance n0. The cyclic prefix is assumed long
// enough that subcarriers do not interfere, so the channel is diagonal.
inline OfdmFrame transmit(const OfdmFrame& frame, const ChannelRealization& ch, double n0,
                          Rng& rng) {
    if (frame.symbols.size() != ch.freq_response.size())
        throw std::invalid_argument("frame length does not match channel response");
    OfdmFrame out(frame.symbols.size());
    for (std::size_t i = 0; i < frame.symbols.size(); ++i) {
        cplx noise = n0 > 0.0 ? rng.cgaussian(n0) : cplx{0.0, 0.0};
        out.symbols[i] = ch.freq_response[i] * frame.symbols[i] + noise;
    }
    return out;
}

enum class CoherencePolicy { per_slot, per_symbol };

struct LinkConfig {
    std::size_t n_data = 512;
    std::size_t n_pilot = 75;
    std::size_t n_ofdm = 5;
    double snr_db = 25.0;
    std::size_t paths = 5;
    double pmax = 1.0;
    CoherencePolicy coherence = CoherencePolicy::per_slot;

    double snr_linear() const { return std::pow(10.0, snr_db / 10.0); }
    double noise_power() const { return pmax / snr_linear(); }
    std::size_t subcarriers() const { return n_data + n_pilot; }

    void validate() const {
        if (n_data < 1) throw std::invalid_argument("n_data must be >= 1");
        if (n_ofdm < 1) throw std::invalid_argument("n_ofdm must be >= 1");
        if (paths < 1) throw std::invalid_argument("paths must be >= 1");
        if (!(pmax > 0.0)) throw std::invalid_argument("pmax must be positive");
        if (!(snr_linear() > 0.0)) throw std::invalid_argument("SNR must be positive");
    }
};

// Writes one realization as "tap,re,im" rows for external cross-checks.
inline std::string channel_csv(const ChannelRealization& ch) {
    std::string out = "tap,re,im\n";
    for (std::size_t l = 0; l < ch.taps.size(); ++l) {
        out += std::to_string(l) + "," + std::to_string(ch.taps[l].real()) + "," +
               std::to_string(ch.taps[l].imag()) + "\n";
    }
    return out;
}

}  // namespace spikelink
