#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spikelink/rng.hpp"
#include "spikelink/snn/spike.hpp"

namespace spikelink {

// Address-event packet: which neuron fired and with what payload level.
struct AerPacket {
    std::uint32_t address = 0;  // in [0, M)
    std::uint32_t payload = 1;  // in {1, ..., 2^m}
};

inline constexpr std::size_t kAerHeaderBits = 16;

// ceil(log2(M)) address bits; a single neuron needs none.
inline std::size_t address_bits(std::size_t neurons) {
    if (neurons == 0) throw std::invalid_argument("neuron count must be positive");
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < neurons) ++bits;
    return bits;
}

struct BitBudget {
    std::size_t info_capacity = 0;  // N_ofdm * N_data * B * r
    std::size_t packet_bits = 0;    // address_bits + m
    std::size_t header_bits = kAerHeaderBits;

    std::size_t max_packets() const {
        if (packet_bits == 0 || info_capacity <= header_bits) return 0;
        return (info_capacity - header_bits) / packet_bits;
    }
};

struct PacketizeResult {
    std::vector<AerPacket> packets;
    std::size_t total_bits = 0;  // B_tot = packet_bits * packet count
};

// One packet per active neuron, in address order.
inline PacketizeResult packetize(const SpikeVector& s, std::size_t neurons, int m) {
    if (s.width() != neurons) throw std::invalid_argument("spike vector width mismatch");
    PacketizeResult res;
    const std::size_t width = address_bits(neurons) + static_cast<std::size_t>(m);
    for (std::size_t i = 0; i < s.width(); ++i) {
        if (s.values[i] > 0)
            res.packets.push_back({static_cast<std::uint32_t>(i),
                                   static_cast<std::uint32_t>(s.values[i])});
    }
    res.total_bits = width * res.packets.size();
    return res;
}

struct SelectionResult {
    std::vector<AerPacket> kept;  // in original address order
    std::size_t dropped = 0;
};

// Keeps everything when the budget allows; otherwise a uniformly random
// subset of the maximal size that still fits.
inline SelectionResult select_packets(const std::vector<AerPacket>& packets,
                                      const BitBudget& budget, Rng& rng) {
    SelectionResult res;
    const std::size_t cap = budget.max_packets();
    if (packets.size() <= cap) {
        res.kept = packets;
        return res;
    }
    std::vector<std::size_t> order(packets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    order.resize(cap);
    std::sort(order.begin(), order.end());
    res.kept.reserve(cap);
    for (std::size_t i : order) res.kept.push_back(packets[i]);
    res.dropped = packets.size() - cap;
    return res;
}

namespace detail {

inline void push_bits(std::vector<std::uint8_t>& bits, std::uint64_t value, std::size_t width) {
    for (std::size_t i = width; i-- > 0;) bits.push_back((value >> i) & 1);  // MSB first
}

inline std::uint64_t pull_bits(const std::vector<std::uint8_t>& bits, std::size_t& pos,
                               std::size_t width) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v = (v << 1) | bits[pos++];
    return v;
}

}  // namespace detail

// Bit layout: [16-bit packet count, MSB first][address ‖ payload]... padded
// with zeros to total_bits.
inline std::vector<std::uint8_t> serialize_packets(const std::vector<AerPacket>& packets,
                                                   std::size_t neurons, int m,
                                                   std::size_t total_bits) {
    const std::size_t abits = address_bits(neurons);
    const std::size_t width = abits + static_cast<std::size_t>(m);
    if (packets.size() >= (std::size_t{1} << kAerHeaderBits))
        throw std::invalid_argument("packet count exceeds header field");
    if (kAerHeaderBits + width * packets.size() > total_bits)
        throw std::invalid_argument("packets exceed serialized capacity");
    std::vector<std::uint8_t> bits;
    bits.reserve(total_bits);
    detail::push_bits(bits, packets.size(), kAerHeaderBits);
    for (const auto& p : packets) {
        detail::push_bits(bits, p.address, abits);
        if (m > 0) detail::push_bits(bits, p.payload - 1, static_cast<std::size_t>(m));
    }
    bits.resize(total_bits, 0);
    return bits;
}

// Inverse of serialize_packets. Returns nullopt when the header claims
// more packets than the stream can hold (treated as an erased slot).
inline std::optional<std::vector<AerPacket>> parse_packets(const std::vector<std::uint8_t>& bits,
                                                           std::size_t neurons, int m) {
    if (bits.size() < kAerHeaderBits) return std::nullopt;
    const std::size_t abits = address_bits(neurons);
    const std::size_t width = abits + static_cast<std::size_t>(m);
    std::size_t pos = 0;
    const std::uint64_t count = detail::pull_bits(bits, pos, kAerHeaderBits);
    if (width > 0 && count * width > bits.size() - kAerHeaderBits) return std::nullopt;
    std::vector<AerPacket> packets;
    packets.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        AerPacket p;
        p.address = static_cast<std::uint32_t>(detail::pull_bits(bits, pos, abits));
        p.payload = m > 0
                        ? static_cast<std::uint32_t>(detail::pull_bits(bits, pos,
                                                                       static_cast<std::size_t>(m))) + 1
                        : 1;
        packets.push_back(p);
    }
    return packets;
}

// Scatters decoded packets into a spike vector; the first occurrence of an
// address wins, out-of-range addresses are ignored.
inline SpikeVector scatter_packets(const std::vector<AerPacket>& packets, std::size_t neurons,
                                   int m) {
    SpikeVector s(neurons, m);
    for (const auto& p : packets) {
        if (p.address >= neurons) continue;
        if (s.values[p.address] == 0) s.values[p.address] = static_cast<int>(p.payload);
    }
    return s;
}

}  // namespace spikelink
