#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikelink/phy/channel.hpp"
#include "spikelink/phy/estimation.hpp"
#include "spikelink/phy/ofdm.hpp"
#include "spikelink/phy/power.hpp"
#include "spikelink/snn/spike.hpp"

namespace spikelink {

// One data-subcarrier slot across the OFDM symbols of a sensing slot.
struct SubcarrierSlot {
    std::size_t symbol = 0;      // OFDM symbol index n
    std::size_t data_index = 0;  // position within the data subcarriers
};

// Disjoint neuron -> subcarrier-slot assignment. Slots are enumerated
// subcarrier-major (all symbols of data subcarrier 0, then subcarrier 1,
// ...) and dealt to neurons in balanced contiguous runs, so with
// M == N_data every neuron owns the same subcarrier in every symbol.
class SubcarrierMap {
public:
    SubcarrierMap() = default;
    SubcarrierMap(std::size_t neurons, std::size_t n_data, std::size_t n_ofdm)
        : neurons_(neurons), n_data_(n_data), n_ofdm_(n_ofdm) {
        const std::size_t total = n_data * n_ofdm;
        if (neurons == 0) throw std::invalid_argument("neuron count must be positive");
        if (total < neurons)
            throw std::invalid_argument("not enough subcarrier slots for all neurons");
        const std::size_t q = total / neurons;
        const std::size_t rem = total % neurons;
        slots_.resize(neurons);
        std::size_t pos = 0;
        for (std::size_t i = 0; i < neurons; ++i) {
            const std::size_t take = q + (i < rem ? 1 : 0);
            slots_[i].reserve(take);
            for (std::size_t j = 0; j < take; ++j, ++pos)
                slots_[i].push_back({pos % n_ofdm, pos / n_ofdm});
        }
    }

    std::size_t neurons() const { return neurons_; }
    std::size_t repetition() const { return slots_.empty() ? 0 : slots_.front().size(); }
    const std::vector<SubcarrierSlot>& slots_of(std::size_t neuron) const {
        return slots_.at(neuron);
    }

    std::string csv() const {
        std::string out = "neuron,symbol,subcarrier\n";
        for (std::size_t i = 0; i < slots_.size(); ++i)
            for (const auto& s : slots_[i])
                out += std::to_string(i) + "," + std::to_string(s.symbol) + "," +
                       std::to_string(s.data_index) + "\n";
        return out;
    }

private:
    std::size_t neurons_ = 0, n_data_ = 0, n_ofdm_ = 0;
    std::vector<std::vector<SubcarrierSlot>> slots_;
};

// Real PAM levels for payload k in {1..2^m}: amplitude k * delta on the
// in-phase component, level 0 (idle) included as a detection hypothesis.
struct PamConstellation {
    int payload_width = 0;
    double delta = 1.0;

    int levels() const { return 1 << payload_width; }
    double amplitude(int level) const { return static_cast<double>(level) * delta; }

    // Nearest level in {0, 1, ..., 2^m}; exact midpoints round up.
    int detect(double value) const {
        const double x = value / delta;
        long k = std::lround(std::floor(x + 0.5));
        if (k < 0) k = 0;
        if (k > levels()) k = levels();
        return static_cast<int>(k);
    }

    // Peak-constrained spacing: the top level sits at sqrt(p).
    static PamConstellation peak_limited(int payload_width, double p) {
        return {payload_width, std::sqrt(p) / static_cast<double>(1 << payload_width)};
    }
};

// Analog transport: payload levels as PAM amplitudes repeated over each
// neuron's subcarrier slots; idle neurons leave their slots silent.
class AnalogModem {
public:
    AnalogModem(const LinkConfig& link, std::size_t neurons, int payload_width)
        : link_(link),
          grid_(link.n_data, link.n_pilot),
          map_(neurons, link.n_data, link.n_ofdm),
          neurons_(neurons),
          payload_width_(payload_width) {
        link.validate();
    }

    const OfdmGrid& grid() const { return grid_; }
    const SubcarrierMap& map() const { return map_; }

    struct TxResult {
        std::vector<OfdmFrame> frames;
        std::vector<double> block_scales;  // per OFDM symbol, average mode
    };

    // Under the peak constraint amplitudes are fixed at k * sqrt(p_t)/2^m.
    // Under the per-block average constraint raw levels are scaled per
    // OFDM symbol until the block meets the budget with equality; the
    // applied scales are reported so the receiver can normalize.
    TxResult tx(const SpikeVector& s, double p_t, PowerMode mode) const {
        if (s.width() != neurons_) throw std::invalid_argument("spike vector width mismatch");
        const PamConstellation pam = base_constellation(p_t, mode);
        std::vector<std::vector<cplx>> data(link_.n_ofdm,
                                            std::vector<cplx>(link_.n_data, cplx{0.0, 0.0}));
        for (std::size_t i = 0; i < neurons_; ++i) {
            const int level = s.values[i];
            if (level == 0) continue;
            const double amp = pam.amplitude(level);
            for (const auto& slot : map_.slots_of(i))
                data[slot.symbol][slot.data_index] = cplx{amp, 0.0};
        }
        TxResult res;
        res.frames.reserve(link_.n_ofdm);
        res.block_scales.assign(link_.n_ofdm, 1.0);
        for (std::size_t sym = 0; sym < link_.n_ofdm; ++sym) {
            res.block_scales[sym] = enforce(data[sym], mode, p_t);
            res.frames.push_back(assemble_frame(grid_, data[sym], link_.pmax));
        }
        return res;
    }

    struct RxResult {
        SpikeVector spikes;
        std::size_t zf_erasures = 0;
        std::size_t dead_neurons = 0;  // all slots erased
    };

    // Equalize, undo the per-symbol block scale, average the real parts
    // over each neuron's slots, then pick the nearest of the 2^m + 1
    // hypotheses. Neurons whose slots were all erased decode to 0.
    RxResult rx(const std::vector<OfdmFrame>& received, const std::vector<double>& block_scales,
                double p_t, PowerMode mode) const {
        if (received.size() != link_.n_ofdm)
            throw std::invalid_argument("expected one received frame per OFDM symbol");
        if (block_scales.size() != link_.n_ofdm)
            throw std::invalid_argument("expected one block scale per OFDM symbol");
        const PamConstellation pam = base_constellation(p_t, mode);

        std::vector<Equalized> eq(link_.n_ofdm);
        RxResult res;
        for (std::size_t sym = 0; sym < link_.n_ofdm; ++sym) {
            const auto estimate = estimate_data_channel(grid_, received[sym], link_.pmax);
            const auto rx_data = extract(received[sym], grid_.data_indices());
            eq[sym] = zf_equalize(rx_data, estimate);
            res.zf_erasures += eq[sym].erased_count();
        }

        res.spikes = SpikeVector(neurons_, payload_width_);
        for (std::size_t i = 0; i < neurons_; ++i) {
            double sum = 0.0;
            std::size_t used = 0;
            for (const auto& slot : map_.slots_of(i)) {
                const auto& e = eq[slot.symbol];
                if (e.erased[slot.data_index]) continue;
                sum += e.symbols[slot.data_index].real() / block_scales[slot.symbol];
                ++used;
            }
            if (used == 0) {
                ++res.dead_neurons;
                continue;
            }
            res.spikes.values[i] = pam.detect(sum / static_cast<double>(used));
        }
        return res;
    }

private:
    PamConstellation base_constellation(double p_t, PowerMode mode) const {
        if (mode == PowerMode::peak) return PamConstellation::peak_limited(payload_width_, p_t);
        return {payload_width_, 1.0};  // average mode normalizes via block scales
    }

    LinkConfig link_;
    OfdmGrid grid_;
    SubcarrierMap map_;
    std::size_t neurons_;
    int payload_width_;
};

}  // namespace spikelink
