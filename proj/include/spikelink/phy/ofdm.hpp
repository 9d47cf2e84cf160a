#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spikelink/rng.hpp"

namespace spikelink {

using cplx = std::complex<double>;

// Subcarrier layout of one OFDM symbol: a pilot at index 0, then blocks of
// 8 data subcarriers separated by single pilots; pilots left over once the
// data subcarriers are exhausted sit at the band edge.
class OfdmGrid {
public:
    OfdmGrid() = default;
    OfdmGrid(std::size_t n_data, std::size_t n_pilot) : n_data_(n_data), n_pilot_(n_pilot) {
        if (n_data == 0) throw std::invalid_argument("need at least one data subcarrier");
        if (n_pilot < 2) throw std::invalid_argument("need at least two pilot subcarriers");
        std::size_t data_left = n_data, pilots_left = n_pilot, idx = 0;
        while (data_left > 0 || pilots_left > 0) {
            if (pilots_left > 0) {
                pilot_indices_.push_back(idx++);
                --pilots_left;
            }
            for (std::size_t k = 0; k < 8 && data_left > 0; ++k) {
                data_indices_.push_back(idx++);
                --data_left;
            }
            if (pilots_left == 0 && data_left > 0) {
                while (data_left > 0) {
                    data_indices_.push_back(idx++);
                    --data_left;
                }
            }
        }
    }

    std::size_t size() const { return n_data_ + n_pilot_; }
    std::size_t n_data() const { return n_data_; }
    std::size_t n_pilot() const { return n_pilot_; }
    const std::vector<std::size_t>& data_indices() const { return data_indices_; }
    const std::vector<std::size_t>& pilot_indices() const { return pilot_indices_; }

    // Known pilot symbols: unit-modulus QPSK from a fixed seeded stream,
    // scaled to amplitude sqrt(pmax). Both ends regenerate them from the
    // grid geometry, so nothing is signalled.
    std::vector<cplx> pilot_symbols(double pmax) const {
        Rng rng(derive_seed(0x70696c6f74ULL, n_data_, n_pilot_));
        std::vector<cplx> p(n_pilot_);
        const double a = std::sqrt(pmax / 2.0);
        for (auto& v : p) {
            const double re = rng.below(2) ? a : -a;
            const double im = rng.below(2) ? a : -a;
            v = {re, im};
        }
        return p;
    }

private:
    std::size_t n_data_ = 0;
    std::size_t n_pilot_ = 0;
    std::vector<std::size_t> data_indices_;
    std::vector<std::size_t> pilot_indices_;
};

// Frequency-domain symbols of one OFDM symbol over all subcarriers.
struct OfdmFrame {
    std::vector<cplx> symbols;

    OfdmFrame() = default;
    explicit OfdmFrame(std::size_t n) : symbols(n, cplx{0.0, 0.0}) {}
};

// Assembles a frame from data-subcarrier symbols plus the grid's pilots.
inline OfdmFrame assemble_frame(const OfdmGrid& grid, const std::vector<cplx>& data,
                                double pmax) {
    if (data.size() != grid.n_data())
        throw std::invalid_argument("data symbol count does not match grid");
    OfdmFrame frame(grid.size());
    const auto pilots = grid.pilot_symbols(pmax);
    for (std::size_t i = 0; i < pilots.size(); ++i)
        frame.symbols[grid.pilot_indices()[i]] = pilots[i];
    for (std::size_t i = 0; i < data.size(); ++i)
        frame.symbols[grid.data_indices()[i]] = data[i];
    return frame;
}

inline std::vector<cplx> extract(const OfdmFrame& frame, const std::vector<std::size_t>& idx) {
    std::vector<cplx> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = frame.symbols.at(idx[i]);
    return out;
}

}  // namespace spikelink
