#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "spikelink/rng.hpp"
#include "spikelink/snn/checkpoint.hpp"
#include "spikelink/snn/network.hpp"

using namespace spikelink;

namespace {

NetworkConfig small_config(int m) {
    NetworkConfig cfg;
    cfg.layer_sizes = {8, 6, 5, 4, 3};
    cfg.split = 2;  // encoder: 8->6->5, decoder: 5->4->3
    cfg.decay = 0.5;
    cfg.alpha = 0.25;
    cfg.payload_width = m;
    return cfg;
}

SpikeVector random_input(std::size_t width, int m_in, Rng& rng) {
    SpikeVector s(width, m_in);
    for (auto& v : s.values) v = static_cast<int>(rng.below((1 << m_in) + 1));
    return s;
}

}  // namespace

TEST_CASE("config validation") {
    auto cfg = small_config(2);
    REQUIRE_NOTHROW(cfg.validate());
    cfg.split = 0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.split = 4;  // == weight layer count, decoder would be empty
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("sub-threshold input produces an all-zero encoder output") {
    auto cfg = small_config(2);
    SplitNetwork net(cfg);
    for (auto& l : net.layers())
        for (auto& w : l.weights.w) w = 1e-4;
    SpikeVector input(8, 1);
    for (auto& v : input.values) v = 1;
    auto out = net.forward_encoder(input);
    REQUIRE(out.active_count() == 0);
}

TEST_CASE("m=0 network emits only binary values") {
    auto cfg = small_config(0);
    SplitNetwork net(cfg);
    Rng rng(3);
    net.init_weights(rng, 2.0);
    for (int t = 0; t < 10; ++t) {
        auto out = net.forward_encoder(random_input(8, 1, rng));
        for (int v : out.values) REQUIRE((v == 0 || v == 1));
    }
}

TEST_CASE("same seed and input give identical outputs") {
    auto cfg = small_config(2);
    SplitNetwork a(cfg), b(cfg);
    Rng ra(17), rb(17);
    a.init_weights(ra);
    b.init_weights(rb);
    Rng input_rng(5);
    std::vector<SpikeVector> inputs;
    for (int t = 0; t < 6; ++t) inputs.push_back(random_input(8, 1, input_rng));
    for (const auto& in : inputs) {
        auto sa = a.forward_encoder(in);
        auto sb = b.forward_encoder(in);
        REQUIRE(sa.values == sb.values);
        REQUIRE(a.forward_decoder(sa) == b.forward_decoder(sb));
    }
}

TEST_CASE("encoder output values respect the payload bound") {
    auto cfg = small_config(3);
    SplitNetwork net(cfg);
    Rng rng(77);
    net.init_weights(rng, 3.0);
    for (int t = 0; t < 50; ++t) {
        auto out = net.forward_encoder(random_input(8, 2, rng));
        for (int v : out.values) {
            REQUIRE(v >= 0);
            REQUIRE(v <= 8);
        }
    }
}

TEST_CASE("checkpoint round-trip is lossless at 32-bit precision") {
    auto cfg = small_config(2);
    SplitNetwork net(cfg);
    Rng rng(99);
    net.init_weights(rng);
    const std::string path = "ckpt_test.bin";
    save_network(net, path);
    auto loaded = load_network(path);

    REQUIRE(loaded.config().layer_sizes == cfg.layer_sizes);
    REQUIRE(loaded.config().split == cfg.split);
    REQUIRE(loaded.config().payload_width == cfg.payload_width);
    for (std::size_t k = 0; k < net.layers().size(); ++k) {
        const auto& a = net.layers()[k].weights.w;
        const auto& b = loaded.layers()[k].weights.w;
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            REQUIRE(static_cast<float>(a[i]) == static_cast<float>(b[i]));
    }

    // second save must be byte-identical
    const std::string path2 = "ckpt_test2.bin";
    save_network(loaded, path2);
    std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    REQUIRE(s1 == s2);
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("loading garbage fails cleanly") {
    const std::string path = "ckpt_bad.bin";
    {
        std::ofstream os(path, std::ios::binary);
        os << "not a checkpoint";
    }
    REQUIRE_THROWS_AS(load_network(path), std::runtime_error);
    std::remove(path.c_str());
}
