#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "spikelink/snn/spike.hpp"

namespace spikelink {

// Clipped uniform quantizer for above-threshold membrane potentials.
// Returns min(floor(alpha * v * 2^m), 2^m), always in {1, ..., 2^m} for
// v above the firing threshold 1 / (alpha * 2^m).
inline int quantize(double v, double alpha, int m) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("quantizer scale alpha must lie in (0,1)");
    if (m < 0) throw std::domain_error("payload width must be >= 0");
    const double levels = static_cast<double>(1 << m);
    const double scaled = std::floor(alpha * v * levels);
    if (scaled > levels) return 1 << m;
    if (scaled < 1.0) return 1;  // guard for v just past threshold
    return static_cast<int>(scaled);
}

struct MLifParams {
    double decay = 0.5;   // delta, strictly inside (0,1)
    double alpha = 0.25;  // quantizer scale, strictly inside (0,1)
    int payload_width = 0;

    // Firing threshold coupled to the quantizer so level 1 starts exactly
    // at threshold: V_thr = 1 / (alpha * 2^m).
    double threshold() const { return 1.0 / (alpha * static_cast<double>(1 << payload_width)); }

    void validate() const {
        if (!(decay > 0.0 && decay < 1.0))
            throw std::invalid_argument("decay must lie in (0,1)");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("alpha must lie in (0,1)");
        if (payload_width < 0) throw std::invalid_argument("payload width must be >= 0");
    }
};

// State of one layer of multi-level LIF neurons.
//
// Update per neuron:
//   V_t = decay * V_{t-1} * (1 - fired_{t-1}) + Z_t
//   S_t = 0                    if V_t <= V_thr
//         quantize(V_t)        if V_t >  V_thr
//
// The reset uses the previous-step spike indicator, not the graded value,
// so a payload level k > 1 still resets the potential exactly once.
class MLifLayer {
public:
    MLifLayer() = default;
    MLifLayer(std::size_t width, MLifParams params) : params_(params) {
        params_.validate();
        potential_.assign(width, 0.0);
        fired_.assign(width, 0);
    }

    std::size_t width() const { return potential_.size(); }
    const MLifParams& params() const { return params_; }
    const std::vector<double>& potentials() const { return potential_; }
    const std::vector<std::uint8_t>& fired() const { return fired_; }

    void reset() {
        std::fill(potential_.begin(), potential_.end(), 0.0);
        std::fill(fired_.begin(), fired_.end(), 0);
    }

    SpikeVector step(std::span<const double> current) {
        if (current.size() != potential_.size())
            throw std::invalid_argument("input current width mismatch");
        const double v_thr = params_.threshold();
        SpikeVector out(width(), params_.payload_width);
        for (std::size_t i = 0; i < potential_.size(); ++i) {
            double v = params_.decay * potential_[i] * (fired_[i] ? 0.0 : 1.0) + current[i];
            potential_[i] = v;
            if (v > v_thr) {
                out.values[i] = quantize(v, params_.alpha, params_.payload_width);
                fired_[i] = 1;
            } else {
                out.values[i] = 0;
                fired_[i] = 0;
            }
        }
        return out;
    }

private:
    MLifParams params_;
    std::vector<double> potential_;
    std::vector<std::uint8_t> fired_;
};

// Output readout layer: leaky integration without threshold or reset, so
// the membrane-potential sum used by the classifier is well defined.
class IntegratorLayer {
public:
    IntegratorLayer() = default;
    IntegratorLayer(std::size_t width, double decay) : decay_(decay), potential_(width, 0.0) {}

    std::size_t width() const { return potential_.size(); }
    double decay() const { return decay_; }
    const std::vector<double>& potentials() const { return potential_; }

    void reset() { std::fill(potential_.begin(), potential_.end(), 0.0); }

    const std::vector<double>& step(std::span<const double> current) {
        if (current.size() != potential_.size())
            throw std::invalid_argument("input current width mismatch");
        for (std::size_t i = 0; i < potential_.size(); ++i)
            potential_[i] = decay_ * potential_[i] + current[i];
        return potential_;
    }

private:
    double decay_ = 0.5;
    std::vector<double> potential_;
};

}  // namespace spikelink
