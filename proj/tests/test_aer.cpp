#include <catch2/catch_amalgamated.hpp>

#include "spikelink/modem/aer.hpp"
#include "spikelink/rng.hpp"

using namespace spikelink;

TEST_CASE("address width") {
    REQUIRE(address_bits(512) == 9);
    REQUIRE(address_bits(2) == 1);
    REQUIRE(address_bits(3) == 2);
    REQUIRE(address_bits(1) == 0);
}

TEST_CASE("packetize bit accounting") {
    SECTION("3 spikes at M=512, m=2 cost 33 bits") {
        SpikeVector s(512, 2);
        s.values[3] = 1;
        s.values[100] = 4;
        s.values[511] = 2;
        auto res = packetize(s, 512, 2);
        REQUIRE(res.packets.size() == 3);
        REQUIRE(res.total_bits == 33);
    }
    SECTION("empty vector costs nothing") {
        SpikeVector s(512, 2);
        auto res = packetize(s, 512, 2);
        REQUIRE(res.packets.empty());
        REQUIRE(res.total_bits == 0);
    }
    SECTION("binary spike at M=512 costs 9 bits") {
        SpikeVector s(512, 0);
        s.values[17] = 1;
        auto res = packetize(s, 512, 0);
        REQUIRE(res.total_bits == 9);
    }
}

TEST_CASE("selection respects the budget") {
    std::vector<AerPacket> packets;
    for (std::uint32_t i = 0; i < 100; ++i) packets.push_back({i, 1});

    SECTION("everything fits") {
        BitBudget budget{16 + 10 * 11, 11};
        Rng rng(1);
        auto sel = select_packets({packets.begin(), packets.begin() + 3}, budget, rng);
        REQUIRE(sel.kept.size() == 3);
        REQUIRE(sel.dropped == 0);
    }
    SECTION("exactly floor(550/11) = 50 survive") {
        BitBudget budget{16 + 550, 11};
        Rng rng(2);
        auto sel = select_packets(packets, budget, rng);
        REQUIRE(sel.kept.size() == 50);
        REQUIRE(sel.dropped == 50);
    }
    SECTION("fixed seed keeps the same subset") {
        BitBudget budget{16 + 550, 11};
        Rng a(3), b(3);
        auto sa = select_packets(packets, budget, a);
        auto sb = select_packets(packets, budget, b);
        REQUIRE(sa.kept.size() == sb.kept.size());
        for (std::size_t i = 0; i < sa.kept.size(); ++i)
            REQUIRE(sa.kept[i].address == sb.kept[i].address);
    }
    SECTION("kept packets stay in address order") {
        BitBudget budget{16 + 220, 11};
        Rng rng(4);
        auto sel = select_packets(packets, budget, rng);
        for (std::size_t i = 1; i < sel.kept.size(); ++i)
            REQUIRE(sel.kept[i].address > sel.kept[i - 1].address);
    }
    SECTION("selection is roughly uniform over packets") {
        BitBudget budget{16 + 550, 11};
        std::vector<int> kept_count(100, 0);
        Rng rng(5);
        const int reps = 4000;
        for (int r = 0; r < reps; ++r) {
            auto sel = select_packets(packets, budget, rng);
            for (const auto& p : sel.kept) ++kept_count[p.address];
        }
        for (int c : kept_count)  // each packet kept with probability 1/2
            REQUIRE(std::abs(c - reps / 2) < reps / 10);
    }
}

TEST_CASE("bitstream layout is bit-exact") {
    // M = 8 (3 address bits), m = 2: [count:16][addr:3|payload-1:2]...
    std::vector<AerPacket> packets{{5, 3}, {1, 4}};
    auto bits = serialize_packets(packets, 8, 2, 32);
    REQUIRE(bits.size() == 32);
    const std::vector<std::uint8_t> expect{
        0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0,  // count = 2
        1, 0, 1,  // address 5
        1, 0,     // payload 3 -> stored 2
        0, 0, 1,  // address 1
        1, 1,     // payload 4 -> stored 3
        0, 0, 0, 0, 0, 0};  // zero padding
    REQUIRE(bits == expect);
}

TEST_CASE("serialize/parse round-trip") {
    Rng rng(6);
    const std::size_t neurons = 37;  // non power of two
    const int m = 3;
    SpikeVector s(neurons, m);
    for (auto& v : s.values) v = rng.below(4) == 0 ? static_cast<int>(1 + rng.below(8)) : 0;
    auto packed = packetize(s, neurons, m);
    auto bits = serialize_packets(packed.packets, neurons, m, 512);
    auto parsed = parse_packets(bits, neurons, m);
    REQUIRE(parsed.has_value());
    auto rebuilt = scatter_packets(*parsed, neurons, m);
    REQUIRE(rebuilt.values == s.values);
}

TEST_CASE("m = 0 packets carry the address only") {
    SpikeVector s(16, 0);
    s.values[9] = 1;
    auto packed = packetize(s, 16, 0);
    auto bits = serialize_packets(packed.packets, 16, 0, 64);
    auto parsed = parse_packets(bits, 16, 0);
    REQUIRE(parsed.has_value());
    REQUIRE(parsed->size() == 1);
    REQUIRE((*parsed)[0].address == 9);
    REQUIRE((*parsed)[0].payload == 1);
}

TEST_CASE("malformed header is flagged") {
    std::vector<std::uint8_t> bits(64, 0);
    bits[0] = 1;  // count = 32768, impossible in 48 payload bits
    REQUIRE_FALSE(parse_packets(bits, 8, 2).has_value());
}

TEST_CASE("duplicate addresses keep the first occurrence") {
    std::vector<AerPacket> packets{{4, 2}, {4, 7}, {2, 1}};
    auto s = scatter_packets(packets, 8, 3);
    REQUIRE(s.values[4] == 2);
    REQUIRE(s.values[2] == 1);
}

TEST_CASE("out-of-range addresses are dropped") {
    std::vector<AerPacket> packets{{11, 2}};
    auto s = scatter_packets(packets, 10, 2);  // 4 address bits can encode 11
    REQUIRE(s.active_count() == 0);
}

TEST_CASE("serialized stream never exceeds the info capacity") {
    Rng rng(7);
    const BitBudget budget{200, 9};
    std::vector<AerPacket> packets;
    for (std::uint32_t i = 0; i < 60; ++i) packets.push_back({i, 1});
    auto sel = select_packets(packets, budget, rng);
    auto bits = serialize_packets(sel.kept, 512, 0, budget.info_capacity);
    REQUIRE(bits.size() == budget.info_capacity);
    REQUIRE(kAerHeaderBits + sel.kept.size() * budget.packet_bits <= budget.info_capacity);
}
