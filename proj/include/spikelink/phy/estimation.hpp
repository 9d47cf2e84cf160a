#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spikelink/phy/ofdm.hpp"

namespace spikelink {

// Least-squares channel estimate on pilot subcarriers: h_hat = y / x_pilot.
inline std::vector<cplx> ls_estimate(const std::vector<cplx>& received_pilots,
                                     const std::vector<cplx>& known_pilots) {
    if (received_pilots.size() != known_pilots.size())
        throw std::invalid_argument("pilot vector length mismatch");
    std::vector<cplx> est(known_pilots.size());
    for (std::size_t i = 0; i < known_pilots.size(); ++i) {
        if (known_pilots[i] == cplx{0.0, 0.0})
            throw std::invalid_argument("zero pilot symbol in configuration");
        est[i] = received_pilots[i] / known_pilots[i];
    }
    return est;
}

// Linear interpolation of pilot estimates onto data subcarriers; indices
// outside the pilot span hold the nearest pilot's value.
inline std::vector<cplx> interpolate(const std::vector<cplx>& pilot_estimates,
                                     const std::vector<std::size_t>& pilot_indices,
                                     const std::vector<std::size_t>& data_indices) {
    if (pilot_estimates.size() != pilot_indices.size())
        throw std::invalid_argument("pilot estimate/index length mismatch");
    if (pilot_indices.size() < 2)
        throw std::invalid_argument("interpolation needs at least two pilots");
    for (std::size_t i = 1; i < pilot_indices.size(); ++i)
        if (pilot_indices[i] <= pilot_indices[i - 1])
            throw std::invalid_argument("pilot indices must be strictly increasing");

    std::vector<cplx> out(data_indices.size());
    for (std::size_t d = 0; d < data_indices.size(); ++d) {
        const std::size_t i = data_indices[d];
        if (i <= pilot_indices.front()) {
            out[d] = pilot_estimates.front();
            continue;
        }
        if (i >= pilot_indices.back()) {
            out[d] = pilot_estimates.back();
            continue;
        }
        const auto it = std::upper_bound(pilot_indices.begin(), pilot_indices.end(), i);
        const std::size_t hi = static_cast<std::size_t>(it - pilot_indices.begin());
        const std::size_t lo = hi - 1;
        if (pilot_indices[lo] == i) {
            out[d] = pilot_estimates[lo];
            continue;
        }
        const double span = static_cast<double>(pilot_indices[hi] - pilot_indices[lo]);
        const double lambda = static_cast<double>(i - pilot_indices[lo]) / span;
        out[d] = pilot_estimates[lo] + (pilot_estimates[hi] - pilot_estimates[lo]) * lambda;
    }
    return out;
}

// Equalized data symbols plus erasure flags for subcarriers whose estimated
// gain fell below the numeric floor.
struct Equalized {
    std::vector<cplx> symbols;
    std::vector<std::uint8_t> erased;
    std::vector<double> gain_sq;  // |h_hat|^2, for LLR scaling

    std::size_t erased_count() const {
        std::size_t n = 0;
        for (auto e : erased) n += e;
        return n;
    }
};

inline constexpr double kZfGainFloor = 1e-9;

// Zero-forcing equalization, x_hat = y / h_hat; gains below the floor flag
// the symbol as erased instead of producing non-finite values.
inline Equalized zf_equalize(const std::vector<cplx>& received_data,
                             const std::vector<cplx>& estimate,
                             double gain_floor = kZfGainFloor) {
    if (received_data.size() != estimate.size())
        throw std::invalid_argument("received/estimate length mismatch");
    Equalized eq;
    eq.symbols.resize(received_data.size());
    eq.erased.resize(received_data.size(), 0);
    eq.gain_sq.resize(received_data.size(), 0.0);
    for (std::size_t i = 0; i < received_data.size(); ++i) {
        const double mag = std::abs(estimate[i]);
        if (mag < gain_floor) {
            eq.symbols[i] = {0.0, 0.0};
            eq.erased[i] = 1;
        } else {
            eq.symbols[i] = received_data[i] / estimate[i];
            eq.gain_sq[i] = mag * mag;
        }
    }
    return eq;
}

// Full pilot-based estimate for one received frame.
inline std::vector<cplx> estimate_data_channel(const OfdmGrid& grid, const OfdmFrame& received,
                                               double pmax) {
    const auto rx_pilots = extract(received, grid.pilot_indices());
    const auto known = grid.pilot_symbols(pmax);
    const auto at_pilots = ls_estimate(rx_pilots, known);
    return interpolate(at_pilots, grid.pilot_indices(), grid.data_indices());
}

}  // namespace spikelink
