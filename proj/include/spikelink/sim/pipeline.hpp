#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikelink/modem/analog.hpp"
#include "spikelink/modem/digital.hpp"
#include "spikelink/phy/channel.hpp"
#include "spikelink/phy/power.hpp"
#include "spikelink/rng.hpp"
#include "spikelink/sim/dataset.hpp"
#include "spikelink/sim/energy.hpp"
#include "spikelink/snn/network.hpp"

namespace spikelink {

enum class Modulation { digital, analog };

inline std::string to_string(Modulation m) {
    return m == Modulation::digital ? "digital" : "analog";
}

inline Modulation modulation_from_string(const std::string& s) {
    if (s == "digital") return Modulation::digital;
    if (s == "analog") return Modulation::analog;
    throw std::invalid_argument("unknown modulation: " + s);
}

struct TrialMetrics {
    std::size_t predicted = 0;
    bool correct = false;
    std::size_t offered_packets = 0;
    std::size_t dropped_packets = 0;
    std::size_t raw_bit_errors = 0, raw_bits = 0;    // pre-decoder
    std::size_t info_bit_errors = 0, info_bits = 0;  // post-decoder
    std::size_t slot_erasures = 0;
    std::size_t zf_erasures = 0;
    std::size_t decode_failures = 0;
    std::size_t dead_neurons = 0;
    std::size_t spike_errors = 0, spike_positions = 0;  // S_hat vs S
    std::size_t accumulate_ops = 0;
    double energy = 0.0;

    double drop_rate() const {
        return offered_packets ? static_cast<double>(dropped_packets) /
                                     static_cast<double>(offered_packets)
                               : 0.0;
    }
    double raw_ber() const {
        return raw_bits ? static_cast<double>(raw_bit_errors) / static_cast<double>(raw_bits)
                        : 0.0;
    }
    double info_ber() const {
        return info_bits ? static_cast<double>(info_bit_errors) / static_cast<double>(info_bits)
                         : 0.0;
    }
};

struct TrialResult {
    TrialMetrics metrics;
    std::vector<std::vector<double>> potential_history;  // decoder readout per slot
    std::vector<SpikeVector> transmitted;                // encoder outputs S_t
    std::vector<SpikeVector> received;                   // reconstructed S_hat_t
};

// Split inference over the radio link. The encoder output of sensing slot
// t is transmitted during slot t+1, so the decoder sees zeros first and
// the final encoder output arrives in a trailing slot: T+1 decoder steps
// for T sensing slots.
class SplitPipeline {
public:
    struct Options {
        LinkConfig link;
        Modulation modulation = Modulation::digital;
        PowerPolicy policy;
        double energy_gamma = 0.0;
        double energy_e_ac = 0.1;  // pJ per accumulate
        std::size_t bp_max_iter = 50;
    };

    SplitPipeline(const Options& opt, std::size_t neurons, int payload_width)
        : opt_(opt), neurons_(neurons), payload_width_(payload_width) {
        opt.link.validate();
        opt.policy.validate();
        if (opt.modulation == Modulation::digital)
            digital_ = std::make_unique<DigitalModem>(opt.link, neurons, payload_width);
        else
            analog_ = std::make_unique<AnalogModem>(opt.link, neurons, payload_width);
    }

    const Options& options() const { return opt_; }
    const DigitalModem* digital() const { return digital_.get(); }
    const AnalogModem* analog() const { return analog_.get(); }

    std::size_t capacity_bits() const {
        return digital_ ? digital_->info_capacity_bits() : 0;
    }

    TrialResult run_trial(SplitNetwork& net, const EventSample& sample, Rng& rng) const {
        check_network(net, sample);
        const std::size_t slots = sample.slots.size();
        TrialResult res;
        TrialMetrics& m = res.metrics;
        std::vector<SpikeActivity> activity;

        net.reset_state();
        res.transmitted.reserve(slots);
        for (std::size_t t = 0; t < slots; ++t) {
            record_input_activity(activity, net, sample.slots[t]);
            res.transmitted.push_back(net.forward_encoder(sample.slots[t]));
            record_encoder_activity(activity, net);
        }

        const auto schedule = dynamic_schedule(opt_.policy.pmax, slots, opt_.policy.decay_b);
        const double n0 = opt_.link.noise_power();

        // slot 1: nothing delivered yet
        SpikeVector zeros(neurons_, payload_width_);
        res.potential_history.push_back(net.forward_decoder(zeros));
        record_decoder_activity(activity, net, zeros);

        res.received.reserve(slots);
        for (std::size_t t = 0; t < slots; ++t) {
            const SpikeVector s_hat =
                transport(res.transmitted[t], schedule[t], n0, m, rng);
            res.received.push_back(s_hat);
            m.spike_positions += neurons_;
            for (std::size_t i = 0; i < neurons_; ++i)
                m.spike_errors += (s_hat.values[i] != res.transmitted[t].values[i]);
            res.potential_history.push_back(net.forward_decoder(s_hat));
            record_decoder_activity(activity, net, s_hat);
        }

        m.predicted = classify(res.potential_history);
        m.correct = (m.predicted == sample.label);
        const auto energy = energy_estimate(activity, opt_.energy_gamma, opt_.energy_e_ac);
        m.accumulate_ops = energy.accumulate_ops;
        m.energy = energy.total;
        return res;
    }

    // Reference run without the radio link: the decoder consumes the
    // encoder output in the same slot.
    TrialResult run_centralized(SplitNetwork& net, const EventSample& sample) const {
        check_network(net, sample);
        TrialResult res;
        std::vector<SpikeActivity> activity;
        net.reset_state();
        for (const auto& frame : sample.slots) {
            record_input_activity(activity, net, frame);
            SpikeVector s = net.forward_encoder(frame);
            record_encoder_activity(activity, net);
            res.transmitted.push_back(s);
            res.received.push_back(s);
            res.potential_history.push_back(net.forward_decoder(s));
            record_decoder_activity(activity, net, s);
        }
        res.metrics.predicted = classify(res.potential_history);
        res.metrics.correct = (res.metrics.predicted == sample.label);
        const auto energy = energy_estimate(activity, opt_.energy_gamma, opt_.energy_e_ac);
        res.metrics.accumulate_ops = energy.accumulate_ops;
        res.metrics.energy = energy.total;
        return res;
    }

private:
    void check_network(const SplitNetwork& net, const EventSample& sample) const {
        if (net.encoder_output_width() != neurons_)
            throw std::invalid_argument("network encoder width does not match pipeline");
        if (net.payload_width() != payload_width_)
            throw std::invalid_argument("network payload width does not match pipeline");
        if (sample.slots.empty()) throw std::invalid_argument("sample has no slots");
    }

    // One sensing slot over the air; returns the reconstructed spikes.
    SpikeVector transport(const SpikeVector& s, double p_t, double n0, TrialMetrics& m,
                          Rng& rng) const {
        const std::size_t n_ofdm = opt_.link.n_ofdm;
        auto channel_for = [&](std::size_t sym, ChannelRealization& slot_ch) -> const ChannelRealization& {
            if (opt_.link.coherence == CoherencePolicy::per_symbol || sym == 0)
                slot_ch = draw_channel(opt_.link.paths, opt_.link.subcarriers(), rng);
            return slot_ch;
        };

        if (opt_.modulation == Modulation::digital) {
            auto tx = digital_->tx(s, p_t, opt_.policy.mode, rng);
            m.offered_packets += tx.offered_packets;
            m.dropped_packets += tx.dropped_packets;
            assert_power(tx.frames, p_t);
            ChannelRealization slot_ch;
            std::vector<OfdmFrame> received;
            received.reserve(n_ofdm);
            for (std::size_t sym = 0; sym < n_ofdm; ++sym)
                received.push_back(transmit(tx.frames[sym], channel_for(sym, slot_ch), n0, rng));
            auto rx = digital_->rx(received, n0, p_t, opt_.bp_max_iter);
            m.raw_bits += tx.coded_bits.size();
            for (std::size_t i = 0; i < tx.coded_bits.size(); ++i)
                m.raw_bit_errors += (tx.coded_bits[i] != rx.raw_bits[i]);
            m.info_bits += tx.info_bits.size();
            for (std::size_t i = 0; i < tx.info_bits.size(); ++i)
                m.info_bit_errors += (tx.info_bits[i] != rx.info_bits[i]);
            m.slot_erasures += rx.slot_erased;
            m.zf_erasures += rx.zf_erasures;
            m.decode_failures += rx.decode_failures;
            return rx.spikes;
        }

        auto tx = analog_->tx(s, p_t, opt_.policy.mode);
        assert_power(tx.frames, p_t);
        ChannelRealization slot_ch;
        std::vector<OfdmFrame> received;
        received.reserve(n_ofdm);
        for (std::size_t sym = 0; sym < n_ofdm; ++sym)
            received.push_back(transmit(tx.frames[sym], channel_for(sym, slot_ch), n0, rng));
        auto rx = analog_->rx(received, tx.block_scales, p_t, opt_.policy.mode);
        m.zf_erasures += rx.zf_erasures;
        m.dead_neurons += rx.dead_neurons;
        return rx.spikes;
    }

    // Every transmitted frame must satisfy the active power constraint on
    // its data subcarriers; violations abort the trial.
    void assert_power(const std::vector<OfdmFrame>& frames, double p_t) const {
        const auto& grid = opt_.modulation == Modulation::digital ? digital_->grid()
                                                                  : analog_->grid();
        for (const auto& f : frames) {
            const auto data = extract(f, grid.data_indices());
            if (!satisfies(data, opt_.policy.mode, p_t))
                throw std::runtime_error("transmitted frame violates power constraint");
        }
    }

    void record_input_activity(std::vector<SpikeActivity>& activity, const SplitNetwork& net,
                               const SpikeVector& input) const {
        activity.push_back({input.active_count(), net.layers().front().weights.rows,
                            input.payload_width});
    }

    // Hidden encoder layers drive the next encoder layer; the encoder
    // output layer's cost is charged where its spikes land, at the decoder.
    void record_encoder_activity(std::vector<SpikeActivity>& activity,
                                 const SplitNetwork& net) const {
        for (std::size_t k = 0; k + 1 < net.split(); ++k) {
            const auto& l = net.layers()[k];
            activity.push_back({count_fired(l), net.layers()[k + 1].weights.rows,
                                l.params.payload_width});
        }
    }

    void record_decoder_activity(std::vector<SpikeActivity>& activity, const SplitNetwork& net,
                                 const SpikeVector& received) const {
        activity.push_back({received.active_count(),
                            net.layers()[net.split()].weights.rows, received.payload_width});
        for (std::size_t k = net.split(); k + 1 < net.layers().size(); ++k) {
            const auto& l = net.layers()[k];
            if (l.readout) continue;
            activity.push_back({count_fired(l), net.layers()[k + 1].weights.rows,
                                l.params.payload_width});
        }
    }

    static std::size_t count_fired(const SplitNetwork::Layer& l) {
        std::size_t n = 0;
        for (auto f : l.state.fired()) n += f;
        return n;
    }

    Options opt_;
    std::size_t neurons_;
    int payload_width_;
    std::unique_ptr<DigitalModem> digital_;
    std::unique_ptr<AnalogModem> analog_;
};

}  // namespace spikelink
