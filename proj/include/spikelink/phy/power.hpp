#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace spikelink {

enum class PowerMode { per_block_average, peak };

inline std::string to_string(PowerMode m) {
    return m == PowerMode::per_block_average ? "block" : "peak";
}

inline PowerMode power_mode_from_string(const std::string& s) {
    if (s == "block" || s == "per_block_average") return PowerMode::per_block_average;
    if (s == "peak") return PowerMode::peak;
    throw std::invalid_argument("unknown power mode: " + s);
}

struct PowerPolicy {
    PowerMode mode = PowerMode::per_block_average;
    double pmax = 1.0;
    double decay_b = 1.0;  // 1.0 = uniform allocation across slots

    void validate() const {
        if (!(pmax > 0.0)) throw std::invalid_argument("pmax must be positive");
        if (!(decay_b >= 1.0)) throw std::invalid_argument("decay b must be >= 1");
    }
};

// Exponentially decaying per-slot power P_t = a * b^(T-t); the scale a is
// chosen so the budget (1/T) * sum P_t = pmax holds with equality.
inline std::vector<double> dynamic_schedule(double pmax, std::size_t slots, double b) {
    if (slots == 0) throw std::invalid_argument("need at least one slot");
    if (!(b >= 1.0)) throw std::invalid_argument("decay b must be >= 1");
    double denom = 0.0;
    for (std::size_t j = 0; j < slots; ++j) denom += std::pow(b, static_cast<double>(j));
    const double a = pmax * static_cast<double>(slots) / denom;
    std::vector<double> schedule(slots);
    for (std::size_t t = 0; t < slots; ++t)
        schedule[t] = a * std::pow(b, static_cast<double>(slots - 1 - t));
    return schedule;
}

// Scales data symbols so the active constraint holds for this block:
//   per_block_average: (1/n) * ||x||^2 <= p_t, tight when any symbol is
//                      nonzero (the sparsity-adaptive boost);
//   peak:              |x_i|^2 <= p_t for every symbol, offenders clamped.
// Returns the uniform scale applied in average mode (1.0 in peak mode).
inline double enforce(std::vector<std::complex<double>>& symbols, PowerMode mode, double p_t) {
    if (!(p_t > 0.0)) throw std::invalid_argument("slot power must be positive");
    if (mode == PowerMode::peak) {
        for (auto& x : symbols) {
            const double p = std::norm(x);
            if (p > p_t) x *= std::sqrt(p_t / p);
        }
        return 1.0;
    }
    double total = 0.0;
    for (const auto& x : symbols) total += std::norm(x);
    if (total == 0.0) return 1.0;
    const double scale = std::sqrt(p_t * static_cast<double>(symbols.size()) / total);
    for (auto& x : symbols) x *= scale;
    return scale;
}

// True when the block satisfies the stated inequality of the given mode.
inline bool satisfies(const std::vector<std::complex<double>>& symbols, PowerMode mode,
                      double p_t, double tol = 1e-9) {
    if (mode == PowerMode::peak) {
        for (const auto& x : symbols)
            if (std::norm(x) > p_t * (1.0 + tol)) return false;
        return true;
    }
    double total = 0.0;
    for (const auto& x : symbols) total += std::norm(x);
    return total <= p_t * static_cast<double>(symbols.size()) * (1.0 + tol);
}

}  // namespace spikelink
