#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "spikelink/sim/config.hpp"
#include "spikelink/sim/pipeline.hpp"

namespace spikelink {

struct SweepGrid {
    std::vector<double> snr_db = {25.0};
    std::vector<int> payload_widths = {0};
    std::vector<std::size_t> n_ofdm = {5};
    std::vector<PowerMode> power_modes = {PowerMode::per_block_average};
    std::vector<double> decay_b = {1.0};
    std::vector<Modulation> modulations = {Modulation::digital};

    std::size_t size() const {
        return snr_db.size() * payload_widths.size() * n_ofdm.size() * power_modes.size() *
               decay_b.size() * modulations.size();
    }
};

struct SweepPoint {
    std::size_t index = 0;
    double snr_db = 25.0;
    int payload_width = 0;
    std::size_t n_ofdm = 5;
    PowerMode power_mode = PowerMode::per_block_average;
    double decay_b = 1.0;
    Modulation modulation = Modulation::digital;
};

inline std::vector<SweepPoint> expand_grid(const SweepGrid& grid) {
    std::vector<SweepPoint> points;
    points.reserve(grid.size());
    for (Modulation mod : grid.modulations)
        for (double snr : grid.snr_db)
            for (int m : grid.payload_widths)
                for (std::size_t n : grid.n_ofdm)
                    for (PowerMode pm : grid.power_modes)
                        for (double b : grid.decay_b) {
                            SweepPoint p;
                            p.index = points.size();
                            p.snr_db = snr;
                            p.payload_width = m;
                            p.n_ofdm = n;
                            p.power_mode = pm;
                            p.decay_b = b;
                            p.modulation = mod;
                            points.push_back(p);
                        }
    return points;
}

struct PointAggregate {
    SweepPoint point;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double accuracy_mean = 0.0;
    double accuracy_stderr = 0.0;
    double drop_rate_mean = 0.0;
    double raw_ber_mean = 0.0;
    double info_ber_mean = 0.0;
    double energy_mean = 0.0;
    std::size_t capacity_bits = 0;
};

inline const char* kSweepCsvHeader =
    "kind,point,modulation,snr_db,m,n_ofdm,power_mode,decay_b,capacity_bits,trial,label,"
    "predicted,correct,drop_rate,raw_ber,info_ber,slot_erasures,zf_erasures,dead_neurons,"
    "spike_error_rate,energy,accumulate_ops,status,accuracy_mean,accuracy_stderr,"
    "drop_rate_mean,raw_ber_mean,info_ber_mean,energy_mean";

// Runs trials for every grid point over a shared test set. Networks are
// supplied per payload width (they are trained per m). Trials execute on a
// small worker pool; per-trial seeds derive from (seed, point, trial), so
// results do not depend on scheduling. Rows for trials that throw are
// marked failed and the sweep continues.
class SweepRunner {
public:
    using NetworkProvider = std::function<std::shared_ptr<const SplitNetwork>(int payload_width)>;

    SweepRunner(ExperimentConfig base, NetworkProvider provider)
        : base_(std::move(base)), provider_(std::move(provider)) {}

    std::vector<PointAggregate> run(const SweepGrid& grid, const EventDataset& test_set,
                                    std::ostream& csv, std::size_t workers = 1) const {
        const auto points = expand_grid(grid);
        csv << kSweepCsvHeader << "\n";

        struct Row {
            bool failed = false;
            std::string message;
            std::size_t label = 0;
            TrialMetrics metrics;
        };

        std::vector<PointAggregate> aggregates;
        aggregates.reserve(points.size());
        for (const auto& point : points) {
            ExperimentConfig cfg = base_;
            cfg.link.snr_db = point.snr_db;
            cfg.link.n_ofdm = point.n_ofdm;
            cfg.network.payload_width = point.payload_width;
            cfg.policy.mode = point.power_mode;
            cfg.policy.decay_b = point.decay_b;
            cfg.modulation = point.modulation;

            PointAggregate agg;
            agg.point = point;
            agg.trials = cfg.trials;

            std::shared_ptr<const SplitNetwork> net;
            std::unique_ptr<SplitPipeline> pipeline;
            std::string point_error;
            try {
                net = provider_(point.payload_width);
                SplitPipeline::Options opt{cfg.link, cfg.modulation, cfg.policy,
                                           cfg.energy_gamma, cfg.energy_e_ac};
                pipeline = std::make_unique<SplitPipeline>(opt, net->encoder_output_width(),
                                                           point.payload_width);
                agg.capacity_bits = pipeline->capacity_bits();
            } catch (const std::exception& ex) {
                point_error = ex.what();
            }

            std::vector<Row> rows(cfg.trials);
            if (point_error.empty()) {
                std::atomic<std::size_t> next{0};
                auto worker = [&]() {
                    for (;;) {
                        const std::size_t t = next.fetch_add(1);
                        if (t >= cfg.trials) return;
                        const auto& sample = test_set.samples[t % test_set.samples.size()];
                        rows[t].label = sample.label;
                        try {
                            SplitNetwork local = *net;  // private mutable state
                            Rng rng(derive_seed(cfg.seed, point.index, t));
                            rows[t].metrics = pipeline->run_trial(local, sample, rng).metrics;
                        } catch (const std::exception& ex) {
                            rows[t].failed = true;
                            rows[t].message = ex.what();
                        }
                    }
                };
                const std::size_t n_workers = std::max<std::size_t>(1, workers);
                std::vector<std::thread> threads;
                for (std::size_t w = 1; w < n_workers; ++w) threads.emplace_back(worker);
                worker();
                for (auto& th : threads) th.join();
            } else {
                for (auto& row : rows) {
                    row.failed = true;
                    row.message = point_error;
                }
            }

            double acc = 0.0, drop = 0.0, raw = 0.0, info = 0.0, energy = 0.0;
            std::size_t ok = 0;
            for (std::size_t t = 0; t < rows.size(); ++t) {
                const auto& row = rows[t];
                csv << "trial," << point.index << "," << to_string(point.modulation) << ","
                    << point.snr_db << "," << point.payload_width << "," << point.n_ofdm << ","
                    << to_string(point.power_mode) << "," << point.decay_b << ","
                    << agg.capacity_bits << "," << t << ",";
                if (row.failed) {
                    csv << row.label << ",,,,,,,,,,,,failed: " << sanitize(row.message)
                        << ",,,,,,\n";
                    ++agg.failures;
                    continue;
                }
                const auto& m = row.metrics;
                const double spike_err =
                    m.spike_positions
                        ? static_cast<double>(m.spike_errors) /
                              static_cast<double>(m.spike_positions)
                        : 0.0;
                csv << row.label << "," << m.predicted << "," << (m.correct ? 1 : 0) << ","
                    << m.drop_rate() << "," << m.raw_ber() << "," << m.info_ber() << ","
                    << m.slot_erasures << "," << m.zf_erasures << "," << m.dead_neurons << ","
                    << spike_err << "," << m.energy << "," << m.accumulate_ops << ",ok,,,,,,\n";
                acc += m.correct ? 1.0 : 0.0;
                drop += m.drop_rate();
                raw += m.raw_ber();
                info += m.info_ber();
                energy += m.energy;
                ++ok;
            }
            if (ok > 0) {
                agg.accuracy_mean = acc / static_cast<double>(ok);
                agg.accuracy_stderr = std::sqrt(agg.accuracy_mean * (1.0 - agg.accuracy_mean) /
                                                static_cast<double>(ok));
                agg.drop_rate_mean = drop / static_cast<double>(ok);
                agg.raw_ber_mean = raw / static_cast<double>(ok);
                agg.info_ber_mean = info / static_cast<double>(ok);
                agg.energy_mean = energy / static_cast<double>(ok);
            }
            csv << "aggregate," << point.index << "," << to_string(point.modulation) << ","
                << point.snr_db << "," << point.payload_width << "," << point.n_ofdm << ","
                << to_string(point.power_mode) << "," << point.decay_b << ","
                << agg.capacity_bits << ",,,,,,,,,,,,,,"
                << (agg.failures == agg.trials ? "failed" : "ok") << ","
                << agg.accuracy_mean << "," << agg.accuracy_stderr << ","
                << agg.drop_rate_mean << "," << agg.raw_ber_mean << "," << agg.info_ber_mean
                << "," << agg.energy_mean << "\n";
            aggregates.push_back(agg);
        }
        return aggregates;
    }

private:
    static std::string sanitize(std::string s) {
        for (auto& ch : s)
            if (ch == ',' || ch == '\n') ch = ';';
        return s;
    }

    ExperimentConfig base_;
    NetworkProvider provider_;
};

}  // namespace spikelink
