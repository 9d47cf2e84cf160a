#pragma once

#include <cstddef>
#include <vector>

namespace spikelink {

// Energy of one multiply-and-accumulate driven by an m-bit spike:
//   E_mac(m) = (1 + gamma * (m - 1)) * E_ac,
// gamma = 0 models hardware where graded payloads are free, gamma = 1 a
// shift-and-accumulate implementation costing m accumulates.
inline double e_mac(int payload_width, double gamma, double e_ac) {
    return (1.0 + gamma * (static_cast<double>(payload_width) - 1.0)) * e_ac;
}

// Spike counts grouped by the payload width of the emitting layer and the
// fan-out its spikes drive.
struct SpikeActivity {
    std::size_t spikes = 0;
    std::size_t fan_out = 0;
    int payload_width = 0;
};

struct EnergyReport {
    std::size_t accumulate_ops = 0;  // sum of spikes * fan_out
    double e_ac = 0.1;               // pJ
    double gamma = 0.0;
    double total = 0.0;              // same unit as e_ac
};

inline EnergyReport energy_estimate(const std::vector<SpikeActivity>& trace, double gamma,
                                    double e_ac) {
    EnergyReport report;
    report.e_ac = e_ac;
    report.gamma = gamma;
    for (const auto& a : trace) {
        report.accumulate_ops += a.spikes * a.fan_out;
        report.total += static_cast<double>(a.spikes * a.fan_out) *
                        e_mac(a.payload_width, gamma, e_ac);
    }
    return report;
}

}  // namespace spikelink
