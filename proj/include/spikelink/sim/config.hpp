#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikelink/phy/channel.hpp"
#include "spikelink/phy/power.hpp"
#include "spikelink/sim/dataset.hpp"
#include "spikelink/sim/pipeline.hpp"
#include "spikelink/snn/network.hpp"

namespace spikelink {

// Structured-text configuration: "[section]" headers and "key = value"
// lines, '#' starts a comment. Values may be scalars or space-separated
// lists. Sections and keys are documented in the README.
class ConfigText {
public:
    ConfigText() = default;

    static ConfigText parse(std::istream& is) {
        ConfigText cfg;
        std::string line, section = "";
        std::size_t lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw std::invalid_argument("bad section header at line " +
                                                std::to_string(lineno));
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("expected key = value at line " +
                                            std::to_string(lineno));
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw std::invalid_argument("empty key at line " +
                                                         std::to_string(lineno));
            cfg.values_[section + "." + key] = value;
        }
        return cfg;
    }

    static ConfigText parse_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw std::runtime_error("cannot open config: " + path);
        return parse(is);
    }

    bool has(const std::string& section, const std::string& key) const {
        return values_.count(section + "." + key) > 0;
    }

    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const {
        const auto it = values_.find(section + "." + key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_real(const std::string& section, const std::string& key, double fallback) const {
        const auto it = values_.find(section + "." + key);
        return it == values_.end() ? fallback : std::stod(it->second);
    }

    long get_int(const std::string& section, const std::string& key, long fallback) const {
        const auto it = values_.find(section + "." + key);
        return it == values_.end() ? fallback : std::stol(it->second);
    }

    std::vector<long> get_int_list(const std::string& section, const std::string& key,
                                   const std::vector<long>& fallback) const {
        const auto it = values_.find(section + "." + key);
        if (it == values_.end()) return fallback;
        std::istringstream ss(it->second);
        std::vector<long> out;
        long v;
        while (ss >> v) out.push_back(v);
        return out;
    }

    std::vector<double> get_real_list(const std::string& section, const std::string& key,
                                      const std::vector<double>& fallback) const {
        const auto it = values_.find(section + "." + key);
        if (it == values_.end()) return fallback;
        std::istringstream ss(it->second);
        std::vector<double> out;
        double v;
        while (ss >> v) out.push_back(v);
        return out;
    }

    void set(const std::string& section, const std::string& key, const std::string& value) {
        values_[section + "." + key] = value;
    }

    // Serializes grouped by section, keys sorted, parse(serialize(x)) == x.
    std::string serialize() const {
        std::map<std::string, std::map<std::string, std::string>> grouped;
        for (const auto& [skey, value] : values_) {
            const auto dot = skey.find('.');
            grouped[skey.substr(0, dot)][skey.substr(dot + 1)] = value;
        }
        std::ostringstream os;
        for (const auto& [section, kv] : grouped) {
            if (!section.empty()) os << "[" << section << "]\n";
            for (const auto& [key, value] : kv) os << key << " = " << value << "\n";
            os << "\n";
        }
        return os.str();
    }

private:
    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

    std::map<std::string, std::string> values_;
};

// Everything one experiment needs; populated from a config file plus CLI
// overrides, then written back next to the outputs as the resolved config.
struct ExperimentConfig {
    NetworkConfig network;
    LinkConfig link;
    PowerPolicy policy;
    Modulation modulation = Modulation::digital;
    SyntheticSpec dataset;
    std::string dataset_path;  // optional event-file override
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    double energy_gamma = 0.0;
    double energy_e_ac = 0.1;
    double train_lr = 0.05;
    std::size_t train_epochs = 30;
    std::size_t train_batch = 16;
    std::size_t train_samples = 256;
    double surrogate_gamma = 1.0;
    double init_gain = 1.0;
    std::size_t workers = 1;

    void validate() const {
        network.validate();
        link.validate();
        policy.validate();
        dataset.validate();
        if (trials == 0) throw std::invalid_argument("trials must be positive");
        if (dataset.slots < 1) throw std::invalid_argument("slots must be positive");
        if (modulation == Modulation::analog &&
            link.n_data * link.n_ofdm < network.encoder_output_width())
            throw std::invalid_argument("analog modulation needs n_data * n_ofdm >= M");
    }
};

inline ExperimentConfig experiment_from_config(const ConfigText& c) {
    ExperimentConfig e;
    {
        auto sizes = c.get_int_list("network", "layers", {32, 24, 16, 16, 4});
        e.network.layer_sizes.assign(sizes.begin(), sizes.end());
        e.network.split = static_cast<std::size_t>(c.get_int("network", "split", 2));
        e.network.decay = c.get_real("network", "decay", 0.5);
        e.network.alpha = c.get_real("network", "alpha", 0.25);
        e.network.payload_width = static_cast<int>(c.get_int("network", "m", 0));
    }
    {
        e.link.n_data = static_cast<std::size_t>(c.get_int("link", "data_subcarriers", 512));
        e.link.n_pilot = static_cast<std::size_t>(c.get_int("link", "pilot_subcarriers", 75));
        e.link.n_ofdm = static_cast<std::size_t>(c.get_int("link", "ofdm_symbols", 5));
        e.link.snr_db = c.get_real("link", "snr_db", 25.0);
        e.link.paths = static_cast<std::size_t>(c.get_int("link", "paths", 5));
        e.link.pmax = c.get_real("link", "pmax", 1.0);
        e.link.coherence = c.get("link", "coherence", "slot") == "symbol"
                               ? CoherencePolicy::per_symbol
                               : CoherencePolicy::per_slot;
    }
    {
        e.policy.mode = power_mode_from_string(c.get("power", "mode", "block"));
        e.policy.pmax = e.link.pmax;
        e.policy.decay_b = c.get_real("power", "decay_b", 1.0);
    }
    {
        e.dataset.classes = static_cast<std::size_t>(c.get_int("dataset", "classes", 4));
        e.dataset.pixels = static_cast<std::size_t>(c.get_int("dataset", "pixels",
                                                              static_cast<long>(e.network.layer_sizes.front())));
        e.dataset.slots = static_cast<std::size_t>(c.get_int("dataset", "slots", 4));
        e.dataset.payload_width = static_cast<int>(c.get_int("dataset", "m_in", 1));
        e.dataset.base_rate = c.get_real("dataset", "base_rate", 1.2);
        e.dataset.low_fraction = c.get_real("dataset", "low_fraction", 0.35);
        e.dataset.background_rate = c.get_real("dataset", "background_rate", 0.02);
        e.dataset_path = c.get("dataset", "path", "");
    }
    {
        e.modulation = modulation_from_string(c.get("run", "modulation", "digital"));
        e.trials = static_cast<std::size_t>(c.get_int("run", "trials", 100));
        e.seed = static_cast<std::uint64_t>(c.get_int("run", "seed", 1));
        e.energy_gamma = c.get_real("run", "energy_gamma", 0.0);
        e.energy_e_ac = c.get_real("run", "energy_e_ac", 0.1);
        e.workers = static_cast<std::size_t>(c.get_int("run", "workers", 1));
    }
    {
        e.train_lr = c.get_real("train", "lr", 0.05);
        e.train_epochs = static_cast<std::size_t>(c.get_int("train", "epochs", 30));
        e.train_batch = static_cast<std::size_t>(c.get_int("train", "batch", 16));
        e.train_samples = static_cast<std::size_t>(c.get_int("train", "samples", 256));
        e.surrogate_gamma = c.get_real("train", "surrogate_gamma", 1.0);
        e.init_gain = c.get_real("train", "init_gain", 1.0);
    }
    return e;
}

inline ConfigText experiment_to_config(const ExperimentConfig& e) {
    ConfigText c;
    {
        std::string sizes;
        for (std::size_t s : e.network.layer_sizes)
            sizes += (sizes.empty() ? "" : " ") + std::to_string(s);
        c.set("network", "layers", sizes);
        c.set("network", "split", std::to_string(e.network.split));
        c.set("network", "decay", std::to_string(e.network.decay));
        c.set("network", "alpha", std::to_string(e.network.alpha));
        c.set("network", "m", std::to_string(e.network.payload_width));
    }
    c.set("link", "data_subcarriers", std::to_string(e.link.n_data));
    c.set("link", "pilot_subcarriers", std::to_string(e.link.n_pilot));
    c.set("link", "ofdm_symbols", std::to_string(e.link.n_ofdm));
    c.set("link", "snr_db", std::to_string(e.link.snr_db));
    c.set("link", "paths", std::to_string(e.link.paths));
    c.set("link", "pmax", std::to_string(e.link.pmax));
    c.set("link", "coherence",
          e.link.coherence == CoherencePolicy::per_symbol ? "symbol" : "slot");
    c.set("power", "mode", to_string(e.policy.mode));
    c.set("power", "decay_b", std::to_string(e.policy.decay_b));
    c.set("dataset", "classes", std::to_string(e.dataset.classes));
    c.set("dataset", "pixels", std::to_string(e.dataset.pixels));
    c.set("dataset", "slots", std::to_string(e.dataset.slots));
    c.set("dataset", "m_in", std::to_string(e.dataset.payload_width));
    c.set("dataset", "base_rate", std::to_string(e.dataset.base_rate));
    c.set("dataset", "low_fraction", std::to_string(e.dataset.low_fraction));
    c.set("dataset", "background_rate", std::to_string(e.dataset.background_rate));
    if (!e.dataset_path.empty()) c.set("dataset", "path", e.dataset_path);
    c.set("run", "modulation", to_string(e.modulation));
    c.set("run", "trials", std::to_string(e.trials));
    c.set("run", "seed", std::to_string(e.seed));
    c.set("run", "energy_gamma", std::to_string(e.energy_gamma));
    c.set("run", "energy_e_ac", std::to_string(e.energy_e_ac));
    c.set("run", "workers", std::to_string(e.workers));
    c.set("train", "lr", std::to_string(e.train_lr));
    c.set("train", "epochs", std::to_string(e.train_epochs));
    c.set("train", "batch", std::to_string(e.train_batch));
    c.set("train", "samples", std::to_string(e.train_samples));
    c.set("train", "surrogate_gamma", std::to_string(e.surrogate_gamma));
    c.set("train", "init_gain", std::to_string(e.init_gain));
    return c;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace spikelink
