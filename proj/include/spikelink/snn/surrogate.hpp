#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace spikelink {

// Piecewise surrogate for d(spike output)/d(membrane potential) of an
// M-LIF neuron with threshold 1/(alpha*2^m). In scaled units
// u = alpha*V*2^m the three branches are, evaluated first match wins:
//   V <  1/(alpha*2^m) : gamma * max(0, 1 - |u - 1|)      rising triangle
//   V <= 1/alpha       : 1                                 constant
//   otherwise          : gamma * max(0, 1 - |u - 2^m|)     falling triangle
inline double surrogate_derivative(double v, double alpha, int m, double gamma) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("alpha must lie in (0,1)");
    if (m < 0) throw std::domain_error("payload width must be >= 0");
    const double levels = static_cast<double>(1 << m);
    const double u = alpha * v * levels;
    const double threshold = 1.0 / (alpha * levels);
    if (v < threshold) return gamma * std::max(0.0, 1.0 - std::abs(u - 1.0));
    if (v <= 1.0 / alpha) return 1.0;
    return gamma * std::max(0.0, 1.0 - std::abs(u - levels));
}

// Temperature-scaled softmax relaxation of the hard payload quantizer:
//   Q~(V) = sum_k k * softmax_k( -(alpha*V*2^m - k)^2 / tau ),  k in {1..2^m}.
// Differentiable everywhere; converges to the nearest level as tau -> 0.
inline double soft_quantize(double v, double alpha, int m, double tau) {
    if (!(tau > 0.0)) throw std::domain_error("temperature must be positive");
    if (m < 0) throw std::domain_error("payload width must be >= 0");
    const int levels = 1 << m;
    const double u = alpha * v * static_cast<double>(levels);
    double max_logit = -std::numeric_limits<double>::infinity();
    std::vector<double> logits(levels);
    for (int k = 1; k <= levels; ++k) {
        const double d = u - static_cast<double>(k);
        logits[k - 1] = -(d * d) / tau;
        max_logit = std::max(max_logit, logits[k - 1]);
    }
    double norm = 0.0, mean = 0.0;
    for (int k = 1; k <= levels; ++k) {
        const double p = std::exp(logits[k - 1] - max_logit);
        norm += p;
        mean += p * static_cast<double>(k);
    }
    return mean / norm;
}

// Analytic derivative dQ~/dV = alpha*2^m * (2/tau) * Var_p(k), where p is
// the softmax weighting over levels used in soft_quantize.
inline double soft_quantize_derivative(double v, double alpha, int m, double tau) {
    if (!(tau > 0.0)) throw std::domain_error("temperature must be positive");
    const int levels = 1 << m;
    const double scale = alpha * static_cast<double>(levels);
    const double u = scale * v;
    double max_logit = -std::numeric_limits<double>::infinity();
    std::vector<double> logits(levels);
    for (int k = 1; k <= levels; ++k) {
        const double d = u - static_cast<double>(k);
        logits[k - 1] = -(d * d) / tau;
        max_logit = std::max(max_logit, logits[k - 1]);
    }
    double norm = 0.0, m1 = 0.0, m2 = 0.0;
    for (int k = 1; k <= levels; ++k) {
        const double p = std::exp(logits[k - 1] - max_logit);
        const double kd = static_cast<double>(k);
        norm += p;
        m1 += p * kd;
        m2 += p * kd * kd;
    }
    m1 /= norm;
    m2 /= norm;
    const double var = std::max(0.0, m2 - m1 * m1);
    return scale * (2.0 / tau) * var;
}

}  // namespace spikelink
