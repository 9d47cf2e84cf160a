// Command-line front end: dataset generation, training, single-point runs
// and grid sweeps with CSV output. Every run writes its resolved config
// next to its outputs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spikelink/spikelink.hpp"

namespace fs = std::filesystem;
using namespace spikelink;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;  // section.key=value
};

ExperimentConfig load_experiment(const CommonArgs& args) {
    ConfigText text;
    if (!args.config_path.empty()) text = ConfigText::parse_file(args.config_path);
    for (const auto& ov : args.overrides) {
        const auto eq = ov.find('=');
        const auto dot = ov.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw std::invalid_argument("override must look like section.key=value: " + ov);
        text.set(ov.substr(0, dot), ov.substr(dot + 1, eq - dot - 1), ov.substr(eq + 1));
    }
    auto exp = experiment_from_config(text);
    exp.validate();
    return exp;
}

void write_resolved(const ExperimentConfig& exp, const std::string& out_stem) {
    write_text_file(out_stem + ".config", experiment_to_config(exp).serialize());
}

EventDataset load_or_generate(const ExperimentConfig& exp, std::size_t count,
                              std::uint64_t stream) {
    if (!exp.dataset_path.empty()) return load_event_file(exp.dataset_path);
    Rng rng(derive_seed(exp.seed, 0x64617461ULL, stream));
    return generate_synthetic_dataset(exp.dataset, count, rng);
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file (key = value sections)");
    cmd->add_option("--set", args.overrides,
                    "override a config entry, e.g. --set link.snr_db=10");
}

std::shared_ptr<SplitNetwork> train_network_for(const ExperimentConfig& base, int payload_width,
                                                std::uint64_t seed, bool quiet) {
    ExperimentConfig exp = base;
    exp.network.payload_width = payload_width;
    exp.seed = seed;
    Rng data_rng(derive_seed(exp.seed, 0x64617461ULL, 0));
    const auto train_set = generate_synthetic_dataset(exp.dataset, exp.train_samples, data_rng);

    auto net = std::make_shared<SplitNetwork>(exp.network);
    Rng init_rng(derive_seed(exp.seed, 0x696e6974ULL, payload_width));
    net->init_weights(init_rng, exp.init_gain);

    SurrogateConfig train_cfg;
    train_cfg.gamma = exp.surrogate_gamma;
    train_cfg.lr = exp.train_lr;
    train_cfg.epochs = exp.train_epochs;
    train_cfg.batch = exp.train_batch;
    train_cfg.seed = derive_seed(exp.seed, 0x736764ULL, payload_width);
    const auto history = train_split_network(*net, train_set, train_cfg);
    if (!quiet && !history.empty())
        std::cerr << "trained m=" << payload_width << ": loss " << history.front().loss
                  << " -> " << history.back().loss << ", train acc "
                  << history.back().accuracy << "\n";
    return net;
}

int cmd_gen_data(const CommonArgs& common, const std::string& out, std::size_t count) {
    auto exp = load_experiment(common);
    const auto ds = load_or_generate(exp, count, 0);
    save_event_file(ds, out);
    write_resolved(exp, out);
    std::cout << "wrote " << ds.samples.size() << " samples (" << ds.pixels << " px, "
              << ds.slots << " slots, " << ds.classes << " classes) to " << out << "\n";
    return 0;
}

int cmd_train(const CommonArgs& common, const std::string& model_out,
              const std::string& loss_csv, bool with_channel) {
    auto exp = load_experiment(common);
    Rng data_rng(derive_seed(exp.seed, 0x64617461ULL, 0));
    const auto train_set = exp.dataset_path.empty()
                               ? generate_synthetic_dataset(exp.dataset, exp.train_samples,
                                                            data_rng)
                               : load_event_file(exp.dataset_path);

    SplitNetwork net(exp.network);
    Rng init_rng(derive_seed(exp.seed, 0x696e6974ULL, exp.network.payload_width));
    net.init_weights(init_rng, exp.init_gain);

    SurrogateConfig cfg;
    cfg.gamma = exp.surrogate_gamma;
    cfg.lr = exp.train_lr;
    cfg.epochs = exp.train_epochs;
    cfg.batch = exp.train_batch;
    cfg.seed = derive_seed(exp.seed, 0x736764ULL, exp.network.payload_width);

    std::vector<EpochStats> history;
    if (with_channel) {
        TrainChannel ch;
        ch.link = exp.link;
        ch.policy = exp.policy;
        history = train_split_network(net, train_set, cfg, &ch);
    } else {
        history = train_split_network(net, train_set, cfg);
    }

    save_network(net, model_out);
    if (!loss_csv.empty()) write_text_file(loss_csv, loss_history_csv(history));
    write_resolved(exp, model_out);
    std::cout << "epochs=" << history.size() << " final_loss=" << history.back().loss
              << " final_train_accuracy=" << history.back().accuracy << " model=" << model_out
              << "\n";
    return 0;
}

int cmd_run(const CommonArgs& common, const std::string& model_path, const std::string& out_csv) {
    auto exp = load_experiment(common);
    SplitNetwork net = model_path.empty()
                           ? *train_network_for(exp, exp.network.payload_width, exp.seed, false)
                           : load_network(model_path);
    if (net.payload_width() != exp.network.payload_width)
        std::cerr << "note: model m=" << net.payload_width() << " overrides config m\n";

    const auto test_set = load_or_generate(exp, exp.trials, 1);
    SplitPipeline::Options opt{exp.link, exp.modulation, exp.policy, exp.energy_gamma,
                               exp.energy_e_ac};
    SplitPipeline pipeline(opt, net.encoder_output_width(), net.payload_width());

    std::ostringstream csv;
    csv << "trial,label,predicted,correct,drop_rate,raw_ber,info_ber,slot_erasures,"
           "zf_erasures,dead_neurons,spike_error_rate,energy,accumulate_ops\n";
    std::size_t correct = 0;
    double drop = 0.0;
    for (std::size_t t = 0; t < exp.trials; ++t) {
        const auto& sample = test_set.samples[t % test_set.samples.size()];
        Rng rng(derive_seed(exp.seed, 0x72756eULL, t));
        const auto res = pipeline.run_trial(net, sample, rng);
        const auto& m = res.metrics;
        const double spike_err = m.spike_positions ? static_cast<double>(m.spike_errors) /
                                                         static_cast<double>(m.spike_positions)
                                                   : 0.0;
        csv << t << "," << sample.label << "," << m.predicted << "," << (m.correct ? 1 : 0)
            << "," << m.drop_rate() << "," << m.raw_ber() << "," << m.info_ber() << ","
            << m.slot_erasures << "," << m.zf_erasures << "," << m.dead_neurons << ","
            << spike_err << "," << m.energy << "," << m.accumulate_ops << "\n";
        correct += m.correct;
        drop += m.drop_rate();
    }
    write_text_file(out_csv, csv.str());
    write_resolved(exp, out_csv);
    std::cout << "accuracy=" << static_cast<double>(correct) / static_cast<double>(exp.trials)
              << " mean_drop_rate=" << drop / static_cast<double>(exp.trials)
              << " trials=" << exp.trials << " csv=" << out_csv << "\n";
    return 0;
}

int cmd_sweep(const CommonArgs& common, const std::string& out_csv,
              const std::string& model_dir, std::vector<double> snrs, std::vector<int> ms,
              std::vector<std::size_t> n_ofdms, std::vector<std::string> modes,
              std::vector<double> bs, std::vector<std::string> mods) {
    auto exp = load_experiment(common);
    SweepGrid grid;
    if (!snrs.empty()) grid.snr_db = snrs;
    if (!ms.empty()) grid.payload_widths = ms;
    if (!n_ofdms.empty()) grid.n_ofdm = n_ofdms;
    if (!modes.empty()) {
        grid.power_modes.clear();
        for (const auto& s : modes) grid.power_modes.push_back(power_mode_from_string(s));
    }
    if (!bs.empty()) grid.decay_b = bs;
    if (!mods.empty()) {
        grid.modulations.clear();
        for (const auto& s : mods) grid.modulations.push_back(modulation_from_string(s));
    }

    const auto test_set = load_or_generate(exp, exp.trials, 1);

    // one network per payload width: loaded from model_dir when present,
    // trained on the synthetic task otherwise (and cached in model_dir)
    std::map<int, std::shared_ptr<const SplitNetwork>> nets;
    auto provider = [&](int m) -> std::shared_ptr<const SplitNetwork> {
        auto it = nets.find(m);
        if (it != nets.end()) return it->second;
        std::shared_ptr<SplitNetwork> net;
        const std::string path = model_dir.empty()
                                     ? ""
                                     : model_dir + "/model_m" + std::to_string(m) + ".bin";
        if (!path.empty() && fs::exists(path)) {
            net = std::make_shared<SplitNetwork>(load_network(path));
        } else {
            net = train_network_for(exp, m, exp.seed, false);
            if (!path.empty()) {
                fs::create_directories(model_dir);
                save_network(*net, path);
            }
        }
        nets[m] = net;
        return nets[m];
    };

    std::ofstream csv(out_csv);
    if (!csv) throw std::runtime_error("cannot open for writing: " + out_csv);
    SweepRunner runner(exp, provider);
    const auto aggregates = runner.run(grid, test_set, csv, exp.workers);
    write_resolved(exp, out_csv);

    for (const auto& a : aggregates) {
        std::cout << to_string(a.point.modulation) << " snr=" << a.point.snr_db
                  << "dB m=" << a.point.payload_width << " n_ofdm=" << a.point.n_ofdm
                  << " power=" << to_string(a.point.power_mode) << " b=" << a.point.decay_b
                  << " accuracy=" << a.accuracy_mean << " +/- " << a.accuracy_stderr
                  << (a.failures ? " failures=" + std::to_string(a.failures) : "") << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"split spiking-network inference over a simulated OFDM link"};
    app.require_subcommand(1);

    CommonArgs gen_args, train_args, run_args, sweep_args;

    auto* gen = app.add_subcommand("gen-data", "generate a synthetic event dataset");
    std::string gen_out = "dataset.events";
    std::size_t gen_count = 256;
    add_common(gen, gen_args);
    gen->add_option("--out", gen_out, "output event file");
    gen->add_option("--count", gen_count, "number of samples");

    auto* train = app.add_subcommand("train", "train the split network");
    std::string model_out = "model.bin", loss_csv = "";
    bool with_channel = false;
    add_common(train, train_args);
    train->add_option("--out", model_out, "checkpoint path");
    train->add_option("--loss-csv", loss_csv, "per-epoch loss CSV");
    train->add_flag("--with-channel", with_channel,
                    "fine-tune through the simulated analog link");

    auto* run = app.add_subcommand("run", "run split-inference trials at one operating point");
    std::string run_model = "", run_csv = "run.csv";
    add_common(run, run_args);
    run->add_option("--model", run_model, "checkpoint (trains a fresh one when omitted)");
    run->add_option("--out", run_csv, "per-trial CSV");

    auto* sweep = app.add_subcommand("sweep", "run a grid of operating points");
    std::string sweep_csv = "sweep.csv", model_dir = "";
    std::vector<double> snrs, bs;
    std::vector<int> ms;
    std::vector<std::size_t> n_ofdms;
    std::vector<std::string> modes, mods;
    add_common(sweep, sweep_args);
    sweep->add_option("--out", sweep_csv, "sweep CSV");
    sweep->add_option("--model-dir", model_dir, "directory of model_m<k>.bin checkpoints");
    sweep->add_option("--snr", snrs, "SNR grid in dB");
    sweep->add_option("--m", ms, "payload width grid");
    sweep->add_option("--n-ofdm", n_ofdms, "OFDM symbols per slot grid");
    sweep->add_option("--power-mode", modes, "power constraint grid: block, peak");
    sweep->add_option("--decay-b", bs, "dynamic power decay grid (b >= 1)");
    sweep->add_option("--modulation", mods, "modulation grid: digital, analog");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_data(gen_args, gen_out, gen_count);
        if (train->parsed()) return cmd_train(train_args, model_out, loss_csv, with_channel);
        if (run->parsed()) return cmd_run(run_args, run_model, run_csv);
        if (sweep->parsed())
            return cmd_sweep(sweep_args, sweep_csv, model_dir, snrs, ms, n_ofdms, modes, bs,
                             mods);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
