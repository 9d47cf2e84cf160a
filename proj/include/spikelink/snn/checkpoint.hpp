#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikelink/snn/network.hpp"

namespace spikelink {

// Binary checkpoint, little-endian:
//   magic "SLNK", u32 version,
//   u32 layer_count_plus_one sizes..., u32 split, f64 decay, f64 alpha,
//   u32 payload_width, then per weight layer rows*cols f32 row-major.
// Weights are stored at 32-bit precision; save/load/save round-trips are
// byte-identical.
namespace detail {

template <typename T>
void write_pod(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("truncated checkpoint");
    return v;
}

}  // namespace detail

inline void save_network(const SplitNetwork& net, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    os.write("SLNK", 4);
    detail::write_pod<std::uint32_t>(os, 1);
    const auto& cfg = net.config();
    detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(cfg.layer_sizes.size()));
    for (std::size_t s : cfg.layer_sizes)
        detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(s));
    detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(cfg.split));
    detail::write_pod<double>(os, cfg.decay);
    detail::write_pod<double>(os, cfg.alpha);
    detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(cfg.payload_width));
    for (const auto& l : net.layers())
        for (double w : l.weights.w)
            detail::write_pod<float>(os, static_cast<float>(w));
    if (!os) throw std::runtime_error("checkpoint write failed: " + path);
}

inline SplitNetwork load_network(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SLNK", 4) != 0)
        throw std::runtime_error("not a spikelink checkpoint: " + path);
    const auto version = detail::read_pod<std::uint32_t>(is);
    if (version != 1) throw std::runtime_error("unsupported checkpoint version");
    NetworkConfig cfg;
    const auto n_sizes = detail::read_pod<std::uint32_t>(is);
    cfg.layer_sizes.resize(n_sizes);
    for (auto& s : cfg.layer_sizes) s = detail::read_pod<std::uint32_t>(is);
    cfg.split = detail::read_pod<std::uint32_t>(is);
    cfg.decay = detail::read_pod<double>(is);
    cfg.alpha = detail::read_pod<double>(is);
    cfg.payload_width = static_cast<int>(detail::read_pod<std::uint32_t>(is));
    SplitNetwork net(cfg);
    for (auto& l : net.layers())
        for (double& w : l.weights.w)
            w = static_cast<double>(detail::read_pod<float>(is));
    return net;
}

}  // namespace spikelink
