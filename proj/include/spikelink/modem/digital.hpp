#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "spikelink/modem/aer.hpp"
#include "spikelink/modem/ldpc.hpp"
#include "spikelink/modem/qpsk.hpp"
#include "spikelink/phy/channel.hpp"
#include "spikelink/phy/estimation.hpp"
#include "spikelink/phy/ofdm.hpp"
#include "spikelink/phy/power.hpp"

namespace spikelink {

inline constexpr std::size_t kQpskBitsPerSymbol = 2;  // B
inline constexpr double kLdpcRate = 0.5;              // r
inline constexpr std::uint64_t kLdpcSeed = 0x5349474dULL;

// Digital transport of graded spikes: AER packets, capacity-limited random
// dropping, one rate-1/2 LDPC codeword per OFDM symbol, Gray QPSK.
class DigitalModem {
public:
    DigitalModem(const LinkConfig& link, std::size_t neurons, int payload_width)
        : link_(link),
          grid_(link.n_data, link.n_pilot),
          neurons_(neurons),
          payload_width_(payload_width),
          code_(link.n_data * kQpskBitsPerSymbol, kLdpcRate, kLdpcSeed) {
        link.validate();
        budget_.info_capacity = link.n_ofdm * code_.k();
        budget_.packet_bits = address_bits(neurons) + static_cast<std::size_t>(payload_width);
        if (budget_.info_capacity <= kAerHeaderBits)
            throw std::invalid_argument("OFDM capacity cannot even carry the packet header");
    }

    const OfdmGrid& grid() const { return grid_; }
    const LdpcCode& code() const { return code_; }
    const BitBudget& budget() const { return budget_; }
    std::size_t info_capacity_bits() const { return budget_.info_capacity; }

    struct TxResult {
        std::vector<OfdmFrame> frames;
        std::vector<std::uint8_t> coded_bits;  // reference for raw-BER metrics
        std::vector<std::uint8_t> info_bits;   // reference for coded-BER metrics
        std::size_t offered_packets = 0;
        std::size_t dropped_packets = 0;
        std::size_t total_bits_offered = 0;  // B_tot before dropping
    };

    // Spike vector -> AER -> selection -> bitstream -> per-symbol LDPC
    // codewords -> QPSK data subcarriers at power p_t.
    TxResult tx(const SpikeVector& s, double p_t, PowerMode mode, Rng& rng) const {
        auto packed = packetize(s, neurons_, payload_width_);
        auto selected = select_packets(packed.packets, budget_, rng);

        TxResult res;
        res.offered_packets = packed.packets.size();
        res.dropped_packets = selected.dropped;
        res.total_bits_offered = packed.total_bits;

        const auto info_stream =
            serialize_packets(selected.kept, neurons_, payload_width_, budget_.info_capacity);
        res.info_bits = info_stream;

        res.frames.reserve(link_.n_ofdm);
        res.coded_bits.reserve(link_.n_ofdm * code_.n());
        for (std::size_t sym = 0; sym < link_.n_ofdm; ++sym) {
            std::vector<std::uint8_t> block(info_stream.begin() + sym * code_.k(),
                                            info_stream.begin() + (sym + 1) * code_.k());
            auto cw = code_.encode(block);
            res.coded_bits.insert(res.coded_bits.end(), cw.begin(), cw.end());
            auto data = qpsk_map(cw, p_t);
            enforce(data, mode, p_t);
            res.frames.push_back(assemble_frame(grid_, data, link_.pmax));
        }
        return res;
    }

    struct RxResult {
        SpikeVector spikes;
        bool slot_erased = false;            // decode failure or bad header
        std::size_t decode_failures = 0;     // non-converged codewords
        std::size_t zf_erasures = 0;         // deep-fade subcarriers
        std::vector<std::uint8_t> raw_bits;  // hard decisions pre-decoding
        std::vector<std::uint8_t> info_bits; // BP output, even on failure
        std::size_t decoded_packets = 0;
    };

    // Received frames -> LS/interp estimate -> ZF -> soft demap -> BP ->
    // packet parse -> spike vector. Any decode failure or malformed header
    // erases the whole slot to zeros. p_t is the (known) data power used by
    // the transmitter in this slot.
    RxResult rx(const std::vector<OfdmFrame>& received, double n0, double p_t,
                std::size_t bp_max_iter = 50) const {
        if (received.size() != link_.n_ofdm)
            throw std::invalid_argument("expected one received frame per OFDM symbol");
        RxResult res;
        res.spikes = SpikeVector(neurons_, payload_width_);
        std::vector<std::uint8_t> info_stream;
        info_stream.reserve(link_.n_ofdm * code_.k());
        bool failed = false;
        for (const auto& frame : received) {
            const auto estimate = estimate_data_channel(grid_, frame, link_.pmax);
            const auto rx_data = extract(frame, grid_.data_indices());
            const auto eq = zf_equalize(rx_data, estimate);
            res.zf_erasures += eq.erased_count();

            std::vector<double> noise_var(eq.symbols.size(), n0);
            for (std::size_t i = 0; i < eq.symbols.size(); ++i)
                if (!eq.erased[i]) noise_var[i] = n0 / eq.gain_sq[i];
            const auto llrs = qpsk_soft_demap(eq.symbols, noise_var, eq.erased, p_t);

            const auto hard = qpsk_hard_demap(eq.symbols);
            res.raw_bits.insert(res.raw_bits.end(), hard.begin(), hard.end());

            auto dec = code_.decode(llrs, bp_max_iter);
            if (!dec.converged) {
                ++res.decode_failures;
                failed = true;
            }
            info_stream.insert(info_stream.end(), dec.info_bits.begin(), dec.info_bits.end());
        }
        res.info_bits = info_stream;
        if (failed) {
            res.slot_erased = true;
            return res;
        }
        const auto packets = parse_packets(info_stream, neurons_, payload_width_);
        if (!packets) {
            res.slot_erased = true;
            return res;
        }
        res.decoded_packets = packets->size();
        res.spikes = scatter_packets(*packets, neurons_, payload_width_);
        return res;
    }

private:
    LinkConfig link_;
    OfdmGrid grid_;
    std::size_t neurons_;
    int payload_width_;
    LdpcCode code_;
    BitBudget budget_;
};

}  // namespace spikelink
