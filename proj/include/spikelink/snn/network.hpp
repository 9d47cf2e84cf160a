#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikelink/rng.hpp"
#include "spikelink/snn/mlif.hpp"
#include "spikelink/snn/spike.hpp"

namespace spikelink {

// Dense weight matrix, row-major, rows = post neurons, cols = pre neurons.
struct LayerWeights {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> w;

    LayerWeights() = default;
    LayerWeights(std::size_t r, std::size_t c) : rows(r), cols(c), w(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return w[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return w[r * cols + c]; }
};

// Input current vector Z = W * S, with spike values treated as integers.
inline std::vector<double> synaptic_current(const LayerWeights& weights, const SpikeVector& s) {
    if (s.width() != weights.cols)
        throw std::invalid_argument("spike vector width does not match weight matrix");
    std::vector<double> z(weights.rows, 0.0);
    for (std::size_t i = 0; i < s.width(); ++i) {
        const int v = s.values[i];
        if (v == 0) continue;  // event-driven accumulate
        const double sv = static_cast<double>(v);
        for (std::size_t r = 0; r < weights.rows; ++r)
            z[r] += weights.at(r, i) * sv;
    }
    return z;
}

struct NetworkConfig {
    std::vector<std::size_t> layer_sizes;  // [input, hidden..., classes]
    std::size_t split = 1;                 // number of weight layers in the encoder
    double decay = 0.5;
    double alpha = 0.25;
    int payload_width = 0;  // m for every hidden M-LIF layer

    std::size_t weight_layer_count() const {
        return layer_sizes.empty() ? 0 : layer_sizes.size() - 1;
    }
    std::size_t classes() const { return layer_sizes.empty() ? 0 : layer_sizes.back(); }
    std::size_t encoder_output_width() const { return layer_sizes.at(split); }

    void validate() const {
        if (layer_sizes.size() < 3)
            throw std::invalid_argument("network needs at least input, one hidden, output");
        if (split < 1 || split >= weight_layer_count())
            throw std::invalid_argument("split index must lie strictly inside the layer stack");
        for (std::size_t s : layer_sizes)
            if (s == 0) throw std::invalid_argument("zero-width layer");
        MLifParams{decay, alpha, payload_width}.validate();
    }
};

// An M-LIF network split into encoder and decoder halves. Weight layer k
// maps layer_sizes[k] -> layer_sizes[k+1]; layers [0, split) belong to the
// encoder, the rest to the decoder. The final layer is a pure integrator
// whose potentials feed the classification readout.
class SplitNetwork {
public:
    struct Layer {
        LayerWeights weights;
        MLifParams params;    // unused for the readout layer
        bool readout = false;
        MLifLayer state;          // hidden layers
        IntegratorLayer readout_state;
    };

    SplitNetwork() = default;

    explicit SplitNetwork(const NetworkConfig& cfg) : cfg_(cfg) {
        cfg.validate();
        layers_.resize(cfg.weight_layer_count());
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            auto& l = layers_[k];
            l.weights = LayerWeights(cfg.layer_sizes[k + 1], cfg.layer_sizes[k]);
            l.readout = (k + 1 == cfg.layer_sizes.size() - 1);
            l.params = MLifParams{cfg.decay, cfg.alpha, cfg.payload_width};
            if (l.readout)
                l.readout_state = IntegratorLayer(l.weights.rows, cfg.decay);
            else
                l.state = MLifLayer(l.weights.rows, l.params);
        }
    }

    const NetworkConfig& config() const { return cfg_; }
    std::vector<Layer>& layers() { return layers_; }
    const std::vector<Layer>& layers() const { return layers_; }
    std::size_t split() const { return cfg_.split; }
    std::size_t encoder_output_width() const { return cfg_.encoder_output_width(); }
    std::size_t classes() const { return cfg_.classes(); }
    int payload_width() const { return cfg_.payload_width; }

    void init_weights(Rng& rng, double gain = 1.0) {
        for (auto& l : layers_) {
            const double bound = gain * std::sqrt(3.0 / static_cast<double>(l.weights.cols));
            for (double& w : l.weights.w) w = bound * (2.0 * rng.uniform() - 1.0);
        }
    }

    void reset_state() {
        for (auto& l : layers_) {
            if (l.readout)
                l.readout_state.reset();
            else
                l.state.reset();
        }
    }

    // One sensing slot through the encoder half; returns the graded spikes
    // of the encoder output layer.
    SpikeVector forward_encoder(const SpikeVector& input) {
        if (input.width() != cfg_.layer_sizes.front())
            throw std::invalid_argument("input width does not match first layer");
        SpikeVector s = input;
        for (std::size_t k = 0; k < cfg_.split; ++k) {
            auto z = synaptic_current(layers_[k].weights, s);
            s = layers_[k].state.step(z);
        }
        return s;
    }

    // One sensing slot through the decoder half; returns the output-layer
    // potentials for the membrane-potential readout.
    std::vector<double> forward_decoder(const SpikeVector& received) {
        if (received.width() != encoder_output_width())
            throw std::invalid_argument("received width does not match decoder input");
        SpikeVector s = received;
        for (std::size_t k = cfg_.split; k < layers_.size(); ++k) {
            auto z = synaptic_current(layers_[k].weights, s);
            if (layers_[k].readout) return layers_[k].readout_state.step(z);
            s = layers_[k].state.step(z);
        }
        throw std::logic_error("decoder has no readout layer");
    }

private:
    NetworkConfig cfg_;
    std::vector<Layer> layers_;
};

// Membrane-potential decision rule: the class with the largest potential
// integrated over the slot history wins; ties break to the lowest index.
inline std::size_t classify(const std::vector<std::vector<double>>& potential_history) {
    if (potential_history.empty()) throw std::invalid_argument("empty potential history");
    const std::size_t classes = potential_history.front().size();
    if (classes == 0) throw std::invalid_argument("empty class dimension");
    std::vector<double> sums(classes, 0.0);
    for (const auto& row : potential_history) {
        if (row.size() != classes) throw std::invalid_argument("ragged potential history");
        for (std::size_t i = 0; i < classes; ++i) sums[i] += row[i];
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < classes; ++i)
        if (sums[i] > sums[best]) best = i;
    return best;
}

}  // namespace spikelink
