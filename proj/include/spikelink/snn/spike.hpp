#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spikelink {

// Per-slot graded outputs of one layer. A value of 0 means no spike; a
// value in {1, ..., 2^m} is a spike carrying that payload level.
struct SpikeVector {
    std::vector<int> values;
    int payload_width = 0;  // m

    SpikeVector() = default;
    SpikeVector(std::size_t width, int m) : values(width, 0), payload_width(m) {}
    SpikeVector(std::vector<int> v, int m) : values(std::move(v)), payload_width(m) {}

    std::size_t width() const { return values.size(); }
    int max_level() const { return 1 << payload_width; }

    std::size_t active_count() const {
        std::size_t n = 0;
        for (int v : values) n += (v > 0);
        return n;
    }

    void validate() const {
        if (payload_width < 0) throw std::invalid_argument("negative payload width");
        for (int v : values) {
            if (v < 0 || v > max_level())
                throw std::out_of_range("spike value outside {0,...,2^m}");
        }
    }
};

}  // namespace spikelink
