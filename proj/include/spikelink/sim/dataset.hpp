#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikelink/rng.hpp"
#include "spikelink/snn/spike.hpp"

namespace spikelink {

// One labelled sequence of per-slot accumulated event frames.
struct EventSample {
    std::vector<SpikeVector> slots;
    std::size_t label = 0;
};

struct EventDataset {
    std::vector<EventSample> samples;
    std::size_t pixels = 0;
    std::size_t slots = 0;
    std::size_t classes = 0;
    int payload_width = 0;  // m_in: event counts clip at 2^m_in
};

// Synthetic spatiotemporal rate-map task. Classes come in pairs sharing a
// spatial block but differing in event rate, so both where and how much a
// pixel fires carries label information.
struct SyntheticSpec {
    std::size_t classes = 4;
    std::size_t pixels = 32;
    std::size_t slots = 4;
    int payload_width = 1;   // m_in
    double base_rate = 1.2;  // mean events per active pixel and slot
    double low_fraction = 0.35;
    double background_rate = 0.02;

    void validate() const {
        if (classes < 2) throw std::invalid_argument("need at least two classes");
        if (pixels < classes) throw std::invalid_argument("need at least one pixel per class");
        if (slots < 1) throw std::invalid_argument("need at least one slot");
        if (payload_width < 0) throw std::invalid_argument("payload width must be >= 0");
        if (!(base_rate > 0.0)) throw std::invalid_argument("base rate must be positive");
    }
};

// Mean event rate of class c at (slot t, pixel d).
inline double class_rate(const SyntheticSpec& spec, std::size_t c, std::size_t t,
                         std::size_t d) {
    const std::size_t groups = (spec.classes + 1) / 2;
    const std::size_t group = c / 2;
    const bool high = (c % 2 == 1) || (c == spec.classes - 1 && spec.classes % 2 == 1);
    const std::size_t block = spec.pixels / groups;
    const std::size_t lo = group * block;
    const std::size_t hi = (group + 1 == groups) ? spec.pixels : lo + block;
    double rate = spec.background_rate;
    if (d >= lo && d < hi) {
        const double amp = high ? 1.0 : spec.low_fraction;
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(c) /
                             static_cast<double>(spec.classes);
        const double env = 1.0 + 0.25 * std::cos(2.0 * std::numbers::pi *
                                                     static_cast<double>(t) /
                                                     static_cast<double>(spec.slots) +
                                                 phase);
        rate += spec.base_rate * amp * env;
    }
    return rate;
}

namespace detail {

// Knuth's method; rates here are O(1).
inline int poisson(double lambda, Rng& rng) {
    const double limit = std::exp(-lambda);
    double p = 1.0;
    int k = 0;
    do {
        ++k;
        p *= rng.uniform();
    } while (p > limit);
    return k - 1;
}

}  // namespace detail

inline EventDataset generate_synthetic_dataset(const SyntheticSpec& spec, std::size_t count,
                                               Rng& rng) {
    spec.validate();
    // reject degenerate profiles (identical class rate maps)
    for (std::size_t a = 0; a < spec.classes; ++a) {
        for (std::size_t b = a + 1; b < spec.classes; ++b) {
            double max_diff = 0.0;
            for (std::size_t t = 0; t < spec.slots; ++t)
                for (std::size_t d = 0; d < spec.pixels; ++d)
                    max_diff = std::max(max_diff, std::abs(class_rate(spec, a, t, d) -
                                                           class_rate(spec, b, t, d)));
            if (max_diff < 1e-9)
                throw std::invalid_argument("degenerate class profiles: classes " +
                                            std::to_string(a) + " and " + std::to_string(b) +
                                            " have identical rate maps");
        }
    }

    EventDataset ds;
    ds.pixels = spec.pixels;
    ds.slots = spec.slots;
    ds.classes = spec.classes;
    ds.payload_width = spec.payload_width;
    ds.samples.reserve(count);
    const int clip = 1 << spec.payload_width;
    for (std::size_t i = 0; i < count; ++i) {
        EventSample sample;
        sample.label = i % spec.classes;
        sample.slots.reserve(spec.slots);
        for (std::size_t t = 0; t < spec.slots; ++t) {
            SpikeVector frame(spec.pixels, spec.payload_width);
            for (std::size_t d = 0; d < spec.pixels; ++d) {
                const int events = detail::poisson(class_rate(spec, sample.label, t, d), rng);
                frame.values[d] = std::min(events, clip);
            }
            sample.slots.push_back(std::move(frame));
        }
        ds.samples.push_back(std::move(sample));
    }
    return ds;
}

// Text event-file format:
//   dataset pixels=<D> slots=<T> classes=<C> payload=<m_in>
//   sample <label>
//   <t_slot> <pixel> <polarity>
//   ...
// Event lines accumulate: a pixel's slot value is the number of its event
// lines (clipped at 2^m_in); polarity is carried for DVS-style exports but
// does not affect the accumulated count.
inline void save_event_file(const EventDataset& ds, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open event file for writing: " + path);
    os << "dataset pixels=" << ds.pixels << " slots=" << ds.slots << " classes=" << ds.classes
       << " payload=" << ds.payload_width << "\n";
    for (const auto& s : ds.samples) {
        os << "sample " << s.label << "\n";
        for (std::size_t t = 0; t < s.slots.size(); ++t)
            for (std::size_t d = 0; d < s.slots[t].width(); ++d)
                for (int k = 0; k < s.slots[t].values[d]; ++k)
                    os << t << " " << d << " 1\n";
    }
    if (!os) throw std::runtime_error("event file write failed: " + path);
}

inline EventDataset load_event_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open event file: " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty event file: " + path);
    EventDataset ds;
    {
        std::istringstream hdr(line);
        std::string tag, kv;
        hdr >> tag;
        if (tag != "dataset") throw std::runtime_error("bad event file header: " + path);
        while (hdr >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw std::runtime_error("bad header field: " + kv);
            const std::string key = kv.substr(0, eq);
            const long value = std::stol(kv.substr(eq + 1));
            if (key == "pixels") ds.pixels = static_cast<std::size_t>(value);
            else if (key == "slots") ds.slots = static_cast<std::size_t>(value);
            else if (key == "classes") ds.classes = static_cast<std::size_t>(value);
            else if (key == "payload") ds.payload_width = static_cast<int>(value);
            else throw std::runtime_error("unknown header field: " + key);
        }
    }
    if (ds.pixels == 0 || ds.slots == 0) throw std::runtime_error("bad dataset dimensions");
    const int clip = 1 << ds.payload_width;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        if (line.rfind("sample", 0) == 0) {
            std::string tag;
            std::size_t label;
            ls >> tag >> label;
            if (ds.classes > 0 && label >= ds.classes)
                throw std::runtime_error("label out of range in event file");
            EventSample s;
            s.label = label;
            s.slots.assign(ds.slots, SpikeVector(ds.pixels, ds.payload_width));
            ds.samples.push_back(std::move(s));
            continue;
        }
        if (ds.samples.empty()) throw std::runtime_error("event line before first sample");
        std::size_t t, d;
        long polarity;
        if (!(ls >> t >> d >> polarity)) throw std::runtime_error("bad event line: " + line);
        if (t >= ds.slots || d >= ds.pixels)
            throw std::runtime_error("event out of range: " + line);
        auto& v = ds.samples.back().slots[t].values[d];
        if (v < clip) ++v;
    }
    return ds;
}

}  // namespace spikelink
