#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kinemb/embedding.hpp"
#include "kinemb/errors.hpp"
#include "kinemb/experiment.hpp"
#include "kinemb/ingest.hpp"
#include "kinemb/metrics.hpp"
#include "kinemb/scoring.hpp"
#include "kinemb/util.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitDataFormat = 65;
constexpr int kExitMissingInput = 66;
constexpr int kExitNumeric = 70;

// Mirrors every RunConfig key as a --flag; flags beat the config file, the
// config file beats defaults.
class ConfigFlags {
public:
    void add(CLI::App* cmd, const std::string& key, const std::string& desc) {
        std::string flag = "--" + key;
        for (auto& c : flag)
            if (c == '.') c = '-';
        options_[key] = cmd->add_option(flag, values_[key], desc);
    }

    void add_common_input(CLI::App* cmd) {
        add(cmd, "dataset", "input dataset path");
        add(cmd, "format", "dataset format: triple | coauthorship-csv | kingraph");
        add(cmd, "bins", "number of equal-width time bins");
        add(cmd, "overlap", "fraction of bin width each bin extends rightward [0,1)");
        add(cmd, "out", "output directory");
        add(cmd, "threads", "worker cap (0 = KINEMB_THREADS env, then hardware)");
    }

    void add_pipeline(CLI::App* cmd) {
        add_common_input(cmd);
        add(cmd, "split.mode", "temporal split: ratio | holdout");
        add(cmd, "split.fraction", "training fraction of snapshots (ratio mode)");
        add(cmd, "split.timestep", "target snapshot index (holdout mode)");
        add(cmd, "embedding.backend", "embedding source: builtin | file");
        add(cmd, "embedding.file", "embeddings file (file backend)");
        add(cmd, "dim", "embedding dimension");
        add(cmd, "history", "velocities combined per forecast (h)");
        add(cmd, "series_length", "trailing training snapshots used, 0 = all (l)");
        add(cmd, "predictor",
            "recurrent | persistence | linear-extrapolation | exponential-smoothing");
        add(cmd, "predictor.layers", "hidden widths, e.g. 64,32 (output width = dim)");
        add(cmd, "predictor.window", "timesteps fed per sample (0 = history)");
        add(cmd, "train.epochs", "training epochs");
        add(cmd, "train.step", "learning rate");
        add(cmd, "train.batch", "windows per update");
        add(cmd, "train.clip", "global gradient-norm clip (0 = off)");
        add(cmd, "seed.sampling", "negative-sampling seed");
        add(cmd, "seed.model", "model init/shuffle seed");
    }

    kinemb::RunConfig resolve(const std::string& config_path) const {
        std::map<std::string, std::string> flat = kinemb::RunConfig{}.to_flat();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw kinemb::MissingInputError(config_path);
            const auto from_file = kinemb::parse_config_file(in, config_path).to_flat();
            for (const auto& [k, v] : from_file) flat[k] = v;
        }
        for (const auto& [key, opt] : options_)
            if (opt->count() > 0) flat[key] = values_.at(key);
        auto cfg = kinemb::RunConfig::from_flat(flat);
        cfg.validate();  // bad settings are a usage error, caught before any I/O
        return cfg;
    }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, CLI::Option*> options_;
};

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void print_graph_summary(std::ostream& os, const kinemb::TemporalGraph& g) {
    os << "nodes " << g.num_nodes() << "\n";
    os << "snapshots " << g.num_snapshots() << "\n";
    for (const auto& s : g.snapshots())
        os << "snapshot " << s.index() << " edges " << s.num_edges() << "\n";
}

int cmd_ingest(const kinemb::RunConfig& cfg) {
    const auto g = kinemb::load_dataset(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    {
        auto out = open_output(std::filesystem::path(cfg.out_dir) / "graph.kg");
        kinemb::save_graph(out, g);
    }
    {
        auto out = open_output(std::filesystem::path(cfg.out_dir) / "summary.txt");
        print_graph_summary(out, g);
    }
    print_graph_summary(std::cout, g);
    return 0;
}

int cmd_embed(const kinemb::RunConfig& cfg) {
    const auto g = kinemb::load_dataset(cfg);
    kinemb::AlignedEmbedderConfig ecfg;
    ecfg.dim = cfg.dim;
    std::vector<std::string> warnings;
    const auto seq = kinemb::embed_aligned(g, ecfg, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / "embeddings.kemb";
    auto out = open_output(path);
    kinemb::save_embeddings(out, seq, g.registry());
    std::cout << "wrote " << path.string() << " (T=" << seq.num_timesteps()
              << " N=" << seq.num_nodes() << " D=" << seq.dim() << ")\n";
    return 0;
}

int cmd_run(const kinemb::RunConfig& cfg) {
    const auto g = kinemb::load_dataset(cfg);
    const auto result = kinemb::run_experiment_full(g, cfg);
    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path out_dir(cfg.out_dir);
    {
        auto out = open_output(out_dir / "report.json");
        out << result.report.to_json();
    }
    {
        auto out = open_output(out_dir / "scored.csv");
        kinemb::write_scored_csv(out, result.scored, result.registry);
    }
    {
        auto out = open_output(out_dir / "model.kmodel");
        result.predictor.save(out);
    }
    for (const auto& w : result.report.warnings) std::cerr << "warning: " << w << "\n";
    char line[128];
    std::snprintf(line, sizeof(line), "AUROC %.17g\n", result.report.auroc);
    std::cout << line;
    std::snprintf(line, sizeof(line), "AUPRC %.17g\n", result.report.auprc);
    std::cout << line;
    std::snprintf(line, sizeof(line), "baseline AUROC %.17g\n", result.report.baseline_auroc);
    std::cout << line;
    std::snprintf(line, sizeof(line), "baseline AUPRC %.17g\n", result.report.baseline_auprc);
    std::cout << line;
    return 0;
}

int cmd_sweep(const kinemb::RunConfig& cfg, const std::string& param, const std::string& values,
              std::size_t repeats) {
    kinemb::SweepSpec spec;
    spec.parameter = param;
    spec.repeats = repeats;
    spec.base = cfg;

    // "2..9" is an inclusive range; otherwise a comma list.
    const auto dots = values.find("..");
    if (dots != std::string::npos) {
        const auto lo = std::stoull(values.substr(0, dots));
        const auto hi = std::stoull(values.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument("bad value range '" + values + "'");
        for (auto v = lo; v <= hi; ++v) spec.values.push_back(static_cast<std::size_t>(v));
    } else {
        std::stringstream ss(values);
        std::string field;
        while (std::getline(ss, field, ','))
            spec.values.push_back(static_cast<std::size_t>(std::stoull(field)));
    }

    const auto g = kinemb::load_dataset(cfg);
    std::vector<std::string> warnings;
    const auto reports = kinemb::run_sweep(g, spec, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path out_dir(cfg.out_dir);
    {
        auto out = open_output(out_dir / "sweep.csv");
        kinemb::write_sweep_csv(out, spec, reports);
    }
    for (const auto& report : reports) {
        const std::size_t value = param == "dim" ? report.config.dim
                                  : param == "series_length" ? report.config.series_length
                                                             : report.config.history;
        const auto rep = report.config.seed_sampling - cfg.seed_sampling;
        auto out = open_output(out_dir / ("report_" + param + "_" + std::to_string(value) + "_r" +
                                          std::to_string(rep) + ".json"));
        out << report.to_json();
    }
    std::cout << "wrote " << (out_dir / "sweep.csv").string() << " (" << reports.size()
              << " runs)\n";
    return 0;
}

int cmd_score(const kinemb::RunConfig& cfg, std::size_t top) {
    const auto g = kinemb::load_dataset(cfg);
    const auto result = kinemb::run_experiment_full(g, cfg);

    // Rank the unlinked pairs of the last training snapshot by forecast score:
    // the recommendation-style "which links come next" output.
    const auto& train_last = g.snapshot(result.report.target_timestep - 1);
    std::vector<std::pair<kinemb::NodeId, kinemb::NodeId>> pairs;
    for (kinemb::NodeId u = 0; u < g.num_nodes(); ++u)
        for (kinemb::NodeId v = u + 1; v < g.num_nodes(); ++v)
            if (!train_last.has_edge(u, v)) pairs.emplace_back(u, v);
    if (pairs.empty()) throw std::invalid_argument("no unlinked pairs left to rank");

    auto scored = kinemb::score_pairs(result.locations, pairs);
    const auto ranked = kinemb::rank_candidates(std::move(scored), std::min(top, pairs.size()));

    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / "ranked.csv";
    {
        auto out = open_output(path);
        kinemb::write_scored_csv(out, ranked, result.registry);
    }
    for (const auto& sp : ranked)
        std::cout << result.registry.label_of(sp.u) << " -- " << result.registry.label_of(sp.v)
                  << " score " << sp.score << "\n";
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal link prediction from embedding-space node dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string sweep_param = "history";
    std::string sweep_values = "2..9";
    std::size_t sweep_repeats = 1;
    std::size_t score_top = 20;

    ConfigFlags ingest_flags, embed_flags, run_flags, sweep_flags, score_flags;

    auto* ingest = app.add_subcommand("ingest", "Parse events, bin snapshots, write a graph file");
    ingest->add_option("--config", config_path, "flat key=value config file");
    ingest_flags.add_common_input(ingest);

    auto* embed = app.add_subcommand("embed", "Embed every snapshot and write the sequence");
    embed->add_option("--config", config_path, "flat key=value config file");
    embed_flags.add_common_input(embed);
    embed_flags.add(embed, "dim", "embedding dimension");

    auto* run = app.add_subcommand("run", "Full pipeline: embed, forecast, score, evaluate");
    run->add_option("--config", config_path, "flat key=value config file");
    run_flags.add_pipeline(run);

    auto* sweep = app.add_subcommand("sweep", "Repeat runs over one hyperparameter");
    sweep->add_option("--config", config_path, "flat key=value config file");
    sweep->add_option("--param", sweep_param, "dim | series_length | history");
    sweep->add_option("--values", sweep_values, "comma list (32,64) or range (2..9)");
    sweep->add_option("--repeats", sweep_repeats, "negative-sampling repeats per value");
    sweep_flags.add_pipeline(sweep);

    auto* score = app.add_subcommand("score", "Rank candidate links by forecast score");
    score->add_option("--config", config_path, "flat key=value config file");
    score->add_option("--top", score_top, "candidates to keep");
    score_flags.add_pipeline(score);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(ingest_flags.resolve(config_path));
        if (embed->parsed()) return cmd_embed(embed_flags.resolve(config_path));
        if (run->parsed()) return cmd_run(run_flags.resolve(config_path));
        if (sweep->parsed())
            return cmd_sweep(sweep_flags.resolve(config_path), sweep_param, sweep_values,
                             sweep_repeats);
        if (score->parsed()) return cmd_score(score_flags.resolve(config_path), score_top);
    } catch (const kinemb::MissingInputError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitMissingInput;
    } catch (const kinemb::ParseError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitDataFormat;
    } catch (const kinemb::NumericError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitNumeric;
    } catch (const kinemb::StageError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
