#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "spikelink/modem/analog.hpp"
#include "spikelink/phy/channel.hpp"
#include "spikelink/phy/power.hpp"
#include "spikelink/rng.hpp"
#include "spikelink/sim/dataset.hpp"
#include "spikelink/snn/network.hpp"
#include "spikelink/snn/surrogate.hpp"

namespace spikelink {

struct SurrogateConfig {
    double gamma = 1.0;  // surrogate triangle height
    double lr = 0.05;
    std::size_t epochs = 30;
    std::size_t batch = 16;
    std::uint64_t seed = 1;

    void validate() const {
        if (!(gamma > 0.0)) throw std::invalid_argument("surrogate height must be positive");
        if (!(lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
        if (epochs == 0 || batch == 0) throw std::invalid_argument("epochs/batch must be positive");
    }
};

// Analog link simulated inside the training loop. The forward pass runs
// the hard PAM chain; the backward pass replaces it with the temperature-
// scaled softmax quantizer relaxation.
struct TrainChannel {
    LinkConfig link;
    PowerPolicy policy;
    double tau = 0.25;
};

struct EpochStats {
    std::size_t epoch = 0;
    double loss = 0.0;
    double accuracy = 0.0;
};

namespace detail {

struct LayerCache {
    std::vector<std::vector<double>> v;        // [t][neuron]
    std::vector<std::vector<double>> out;      // spike levels (or potentials for readout)
    std::vector<std::vector<std::uint8_t>> fired;
};

inline std::vector<double> softmax(const std::vector<double>& u) {
    double mx = u.front();
    for (double x : u) mx = std::max(mx, x);
    double norm = 0.0;
    std::vector<double> p(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        p[i] = std::exp(u[i] - mx);
        norm += p[i];
    }
    for (auto& x : p) x /= norm;
    return p;
}

}  // namespace detail

// Backpropagation through time over the split network with the piecewise
// surrogate standing in for every spike/quantizer nonlinearity. Loss is
// cross-entropy on the softmax of time-integrated readout potentials.
// With a TrainChannel, the encoder output crosses the simulated analog
// link in the forward pass while gradients use the soft quantizer at the
// split. Gradients do not flow through the reset indicator.
inline std::vector<EpochStats> train_split_network(SplitNetwork& net, const EventDataset& data,
                                                   const SurrogateConfig& cfg,
                                                   const TrainChannel* channel = nullptr) {
    cfg.validate();
    if (data.samples.empty()) throw std::invalid_argument("empty training set");
    const std::size_t n_layers = net.layers().size();
    const std::size_t slots = data.slots;
    const std::size_t classes = net.classes();
    const double gamma = cfg.gamma;

    std::unique_ptr<AnalogModem> modem;
    std::vector<double> schedule;
    if (channel) {
        channel->link.validate();
        channel->policy.validate();
        modem = std::make_unique<AnalogModem>(channel->link, net.encoder_output_width(),
                                              net.payload_width());
        schedule = dynamic_schedule(channel->policy.pmax, slots, channel->policy.decay_b);
    }

    std::vector<LayerWeights> grads(n_layers);
    for (std::size_t k = 0; k < n_layers; ++k) {
        grads[k] = LayerWeights(net.layers()[k].weights.rows, net.layers()[k].weights.cols);
    }

    std::vector<EpochStats> history;
    history.reserve(cfg.epochs);
    std::vector<std::size_t> order(data.samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(cfg.seed, 0x747261696eULL, epoch));
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        std::size_t epoch_correct = 0;
        std::size_t in_batch = 0;

        auto apply_batch = [&](std::size_t count) {
            if (count == 0) return;
            const double step = cfg.lr / static_cast<double>(count);
            for (std::size_t k = 0; k < n_layers; ++k) {
                auto& w = net.layers()[k].weights.w;
                auto& g = grads[k].w;
                for (std::size_t i = 0; i < w.size(); ++i) {
                    w[i] -= step * g[i];
                    g[i] = 0.0;
                }
            }
        };

        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            const auto& sample = data.samples[order[pos]];
            if (sample.slots.size() != slots)
                throw std::invalid_argument("ragged sample length in training set");

            // ---- forward with caching ----
            std::vector<detail::LayerCache> cache(n_layers);
            std::vector<std::vector<std::vector<double>>> inputs(n_layers);  // [k][t][pre]
            for (auto& c : cache) {
                c.v.assign(slots, {});
                c.out.assign(slots, {});
                c.fired.assign(slots, {});
            }
            for (auto& in : inputs) in.assign(slots, {});

            Rng channel_rng(derive_seed(cfg.seed, 0x6368616eULL, epoch, order[pos]));

            for (std::size_t t = 0; t < slots; ++t) {
                std::vector<double> x(sample.slots[t].values.begin(),
                                      sample.slots[t].values.end());
                for (std::size_t k = 0; k < n_layers; ++k) {
                    auto& l = net.layers()[k];
                    inputs[k][t] = x;
                    std::vector<double> z(l.weights.rows, 0.0);
                    for (std::size_t c = 0; c < l.weights.cols; ++c) {
                        const double xv = x[c];
                        if (xv == 0.0) continue;
                        for (std::size_t r = 0; r < l.weights.rows; ++r)
                            z[r] += l.weights.at(r, c) * xv;
                    }
                    auto& lc = cache[k];
                    lc.v[t].resize(l.weights.rows);
                    lc.out[t].resize(l.weights.rows);
                    lc.fired[t].assign(l.weights.rows, 0);
                    if (l.readout) {
                        for (std::size_t r = 0; r < l.weights.rows; ++r) {
                            const double prev = t > 0 ? lc.v[t - 1][r] : 0.0;
                            lc.v[t][r] = l.params.decay * prev + z[r];
                            lc.out[t][r] = lc.v[t][r];
                        }
                    } else {
                        const double v_thr = l.params.threshold();
                        for (std::size_t r = 0; r < l.weights.rows; ++r) {
                            const double prev = t > 0 ? lc.v[t - 1][r] : 0.0;
                            const bool prev_fired = t > 0 && lc.fired[t - 1][r];
                            double v = l.params.decay * prev * (prev_fired ? 0.0 : 1.0) + z[r];
                            lc.v[t][r] = v;
                            if (v > v_thr) {
                                lc.out[t][r] = quantize(v, l.params.alpha, l.params.payload_width);
                                lc.fired[t][r] = 1;
                            } else {
                                lc.out[t][r] = 0.0;
                            }
                        }
                    }
                    x = lc.out[t];
                    // encoder output crosses the simulated link
                    if (channel && k + 1 == net.split()) {
                        SpikeVector s(l.weights.rows, l.params.payload_width);
                        for (std::size_t r = 0; r < l.weights.rows; ++r)
                            s.values[r] = static_cast<int>(lc.out[t][r]);
                        auto tx = modem->tx(s, schedule[t], channel->policy.mode);
                        std::vector<OfdmFrame> received;
                        ChannelRealization ch = draw_channel(
                            channel->link.paths, channel->link.subcarriers(), channel_rng);
                        received.reserve(channel->link.n_ofdm);
                        for (const auto& frame : tx.frames)
                            received.push_back(transmit(frame, ch, channel->link.noise_power(),
                                                        channel_rng));
                        auto rx = modem->rx(received, tx.block_scales, schedule[t],
                                            channel->policy.mode);
                        x.assign(rx.spikes.values.begin(), rx.spikes.values.end());
                    }
                }
            }

            // ---- loss on integrated readout potentials ----
            std::vector<double> u(classes, 0.0);
            for (std::size_t t = 0; t < slots; ++t)
                for (std::size_t i = 0; i < classes; ++i)
                    u[i] += cache[n_layers - 1].out[t][i];
            const auto probs = detail::softmax(u);
            const double loss = -std::log(std::max(probs[sample.label], 1e-300));
            if (!std::isfinite(loss))
                throw std::runtime_error("training diverged: non-finite loss at epoch " +
                                         std::to_string(epoch));
            epoch_loss += loss;
            std::size_t arg = 0;
            for (std::size_t i = 1; i < classes; ++i)
                if (u[i] > u[arg]) arg = i;
            epoch_correct += (arg == sample.label);

            std::vector<double> dU(classes);
            for (std::size_t i = 0; i < classes; ++i)
                dU[i] = probs[i] - (i == sample.label ? 1.0 : 0.0);

            // ---- backward through time ----
            std::vector<std::vector<double>> dv_next(n_layers);
            for (std::size_t k = 0; k < n_layers; ++k)
                dv_next[k].assign(net.layers()[k].weights.rows, 0.0);

            for (std::size_t t = slots; t-- > 0;) {
                std::vector<double> ds_upper;  // dL/d(output of layer k) at time t
                for (std::size_t k = n_layers; k-- > 0;) {
                    auto& l = net.layers()[k];
                    const auto& lc = cache[k];
                    std::vector<double> dv(l.weights.rows, 0.0);
                    if (l.readout) {
                        for (std::size_t r = 0; r < l.weights.rows; ++r)
                            dv[r] = dU[r] + l.params.decay * dv_next[k][r];
                    } else {
                        const bool at_split_channel = channel && (k + 1 == net.split());
                        for (std::size_t r = 0; r < l.weights.rows; ++r) {
                            double g;
                            if (at_split_channel && lc.fired[t][r]) {
                                g = soft_quantize_derivative(lc.v[t][r], l.params.alpha,
                                                             l.params.payload_width,
                                                             channel->tau);
                            } else {
                                g = surrogate_derivative(lc.v[t][r], l.params.alpha,
                                                         l.params.payload_width, gamma);
                            }
                            const double carry =
                                dv_next[k][r] * l.params.decay * (lc.fired[t][r] ? 0.0 : 1.0);
                            dv[r] = ds_upper[r] * g + carry;
                        }
                    }
                    dv_next[k] = dv;

                    // dZ = dV; accumulate weight grads and push into inputs
                    const auto& x = inputs[k][t];
                    auto& g = grads[k];
                    for (std::size_t r = 0; r < l.weights.rows; ++r) {
                        const double dz = dv[r];
                        if (dz == 0.0) continue;
                        for (std::size_t c = 0; c < l.weights.cols; ++c)
                            g.w[r * l.weights.cols + c] += dz * x[c];
                    }
                    if (k > 0) {
                        std::vector<double> dx(l.weights.cols, 0.0);
                        for (std::size_t r = 0; r < l.weights.rows; ++r) {
                            const double dz = dv[r];
                            if (dz == 0.0) continue;
                            for (std::size_t c = 0; c < l.weights.cols; ++c)
                                dx[c] += l.weights.at(r, c) * dz;
                        }
                        ds_upper = std::move(dx);
                    }
                }
            }

            ++in_batch;
            if (in_batch == cfg.batch) {
                apply_batch(in_batch);
                in_batch = 0;
            }
        }
        apply_batch(in_batch);
        in_batch = 0;

        EpochStats stats;
        stats.epoch = epoch;
        stats.loss = epoch_loss / static_cast<double>(data.samples.size());
        stats.accuracy =
            static_cast<double>(epoch_correct) / static_cast<double>(data.samples.size());
        history.push_back(stats);
    }
    return history;
}

inline std::string loss_history_csv(const std::vector<EpochStats>& history) {
    std::string out = "epoch,loss,train_accuracy\n";
    for (const auto& s : history)
        out += std::to_string(s.epoch) + "," + std::to_string(s.loss) + "," +
               std::to_string(s.accuracy) + "\n";
    return out;
}

}  // namespace spikelink
