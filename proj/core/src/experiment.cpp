#include "kinemb/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "kinemb/errors.hpp"
#include "kinemb/kinematics.hpp"
#include "kinemb/metrics.hpp"
#include "kinemb/util.hpp"

namespace kinemb {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& key) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("bad numeric value '" + s + "' for " + key);
    return v;
}

std::size_t parse_size(const std::string& s, const std::string& key) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("bad count value '" + s + "' for " + key);
    return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("bad seed value '" + s + "' for " + key);
    return v;
}

std::string layers_to_string(const std::vector<std::size_t>& layers) {
    std::string out;
    for (std::size_t k = 0; k < layers.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(layers[k]);
    }
    return out;
}

std::vector<std::size_t> layers_from_string(const std::string& text) {
    std::vector<std::size_t> layers;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ','))
        layers.push_back(parse_size(field, "predictor.layers"));
    if (layers.empty()) throw std::invalid_argument("predictor.layers must list at least one width");
    return layers;
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const NumericError& ex) {
        throw StageError(name, ex.what());
    } catch (const std::exception& ex) {
        throw StageError(name, ex.what());
    }
}

/// Keeps the trailing `count` snapshots, reindexed from 0.
TemporalGraph trailing_window(const TemporalGraph& g, std::size_t count) {
    if (count == 0 || count > g.num_snapshots())
        throw std::invalid_argument("series length " + std::to_string(count) +
                                    " not available from " + std::to_string(g.num_snapshots()) +
                                    " training snapshots");
    const std::size_t first = g.num_snapshots() - count;
    std::vector<Snapshot> kept;
    kept.reserve(count);
    for (std::size_t i = first; i < g.num_snapshots(); ++i)
        kept.emplace_back(i - first, g.snapshot(i).edges(), g.num_nodes());
    return {g.registry(), std::move(kept)};
}

}  // namespace

void RunConfig::validate() const {
    if (format != "triple" && format != "coauthorship-csv" && format != "kingraph")
        throw std::invalid_argument("format must be triple, coauthorship-csv or kingraph");
    if (format != "kingraph" && bins == 0)
        throw std::invalid_argument("bins must be at least 1 for event inputs");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw std::invalid_argument("overlap must lie in [0, 1)");
    if (split_mode != "ratio" && split_mode != "holdout")
        throw std::invalid_argument("split.mode must be ratio or holdout");
    if (split_mode == "ratio" && !(split_fraction > 0.0 && split_fraction < 1.0))
        throw std::invalid_argument("split.fraction must lie in (0, 1)");
    if (split_mode == "holdout" && split_timestep == 0)
        throw std::invalid_argument("split.timestep must be at least 1 (snapshots before it train)");
    if (embedding_backend != "builtin" && embedding_backend != "file")
        throw std::invalid_argument("embedding.backend must be builtin or file");
    if (embedding_backend == "file" && embedding_file.empty())
        throw std::invalid_argument("embedding.file is required with the file backend");
    if (dim == 0) throw std::invalid_argument("dim must be at least 1");
    if (history == 0) throw std::invalid_argument("history must be at least 1");
    if (series_length == 1)
        throw std::invalid_argument("series_length must be 0 (all) or at least 2");
    if (series_length > 0 && history > series_length)
        throw std::invalid_argument("history " + std::to_string(history) +
                                    " exceeds series_length " + std::to_string(series_length));
    predictor_kind_from_name(predictor);  // validates the name
    if (predictor == "recurrent") {
        if (effective_window() < 2)
            throw std::invalid_argument("recurrent predictor needs a window of at least 2 "
                                        "(raise history or set predictor.window)");
        for (std::size_t width : predictor_layers)
            if (width == 0) throw std::invalid_argument("predictor.layers widths must be positive");
    }
    if (train_epochs == 0) throw std::invalid_argument("train.epochs must be at least 1");
    if (!(train_step > 0.0)) throw std::invalid_argument("train.step must be positive");
    if (train_batch == 0) throw std::invalid_argument("train.batch must be at least 1");
    if (!(train_clip >= 0.0)) throw std::invalid_argument("train.clip must be non-negative");
}

std::map<std::string, std::string> RunConfig::to_flat() const {
    std::map<std::string, std::string> out;
    out["dataset"] = dataset;
    out["format"] = format;
    out["bins"] = std::to_string(bins);
    out["overlap"] = format_double(overlap);
    out["split.mode"] = split_mode;
    out["split.fraction"] = format_double(split_fraction);
    out["split.timestep"] = std::to_string(split_timestep);
    out["embedding.backend"] = embedding_backend;
    out["embedding.file"] = embedding_file;
    out["dim"] = std::to_string(dim);
    out["history"] = std::to_string(history);
    out["series_length"] = std::to_string(series_length);
    out["predictor"] = predictor;
    out["predictor.layers"] = layers_to_string(predictor_layers);
    out["predictor.window"] = std::to_string(predictor_window);
    out["train.epochs"] = std::to_string(train_epochs);
    out["train.step"] = format_double(train_step);
    out["train.batch"] = std::to_string(train_batch);
    out["train.clip"] = format_double(train_clip);
    out["seed.sampling"] = std::to_string(seed_sampling);
    out["seed.model"] = std::to_string(seed_model);
    out["threads"] = std::to_string(threads);
    out["out"] = out_dir;
    return out;
}

RunConfig RunConfig::from_flat(const std::map<std::string, std::string>& entries) {
    RunConfig cfg;
    for (const auto& [key, value] : entries) {
        if (key == "dataset") cfg.dataset = value;
        else if (key == "format") cfg.format = value;
        else if (key == "bins") cfg.bins = parse_size(value, key);
        else if (key == "overlap") cfg.overlap = parse_double(value, key);
        else if (key == "split.mode") cfg.split_mode = value;
        else if (key == "split.fraction") cfg.split_fraction = parse_double(value, key);
        else if (key == "split.timestep") cfg.split_timestep = parse_size(value, key);
        else if (key == "embedding.backend") cfg.embedding_backend = value;
        else if (key == "embedding.file") cfg.embedding_file = value;
        else if (key == "dim") cfg.dim = parse_size(value, key);
        else if (key == "history") cfg.history = parse_size(value, key);
        else if (key == "series_length") cfg.series_length = parse_size(value, key);
        else if (key == "predictor") cfg.predictor = value;
        else if (key == "predictor.layers") cfg.predictor_layers = layers_from_string(value);
        else if (key == "predictor.window") cfg.predictor_window = parse_size(value, key);
        else if (key == "train.epochs") cfg.train_epochs = parse_size(value, key);
        else if (key == "train.step") cfg.train_step = parse_double(value, key);
        else if (key == "train.batch") cfg.train_batch = parse_size(value, key);
        else if (key == "train.clip") cfg.train_clip = parse_double(value, key);
        else if (key == "seed.sampling") cfg.seed_sampling = parse_u64(value, key);
        else if (key == "seed.model") cfg.seed_model = parse_u64(value, key);
        else if (key == "threads") cfg.threads = parse_size(value, key);
        else if (key == "out") cfg.out_dir = value;
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
    return cfg;
}

RunConfig parse_config_file(std::istream& in, const std::string& source_name) {
    std::map<std::string, std::string> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        if (line[b] == '#') continue;
        const std::size_t eq = line.find('=', b);
        if (eq == std::string::npos)
            throw ParseError(source_name, lineno, "expected key=value");
        std::string key = line.substr(b, eq - b);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::string value = line.substr(eq + 1);
        const std::size_t vb = value.find_first_not_of(" \t");
        value = vb == std::string::npos ? "" : value.substr(vb);
        while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) value.pop_back();
        if (key.empty()) throw ParseError(source_name, lineno, "empty key");
        if (!entries.emplace(key, value).second)
            throw ParseError(source_name, lineno, "duplicate key '" + key + "'");
    }
    try {
        return RunConfig::from_flat(entries);
    } catch (const std::invalid_argument& ex) {
        throw ParseError(source_name, lineno, ex.what());
    }
}

void write_config_file(std::ostream& out, const RunConfig& cfg) {
    for (const auto& [key, value] : cfg.to_flat()) out << key << '=' << value << '\n';
}

std::string EvalReport::to_json() const {
    nlohmann::ordered_json j;
    j["auroc"] = auroc;
    j["auprc"] = auprc;
    j["baseline_auroc"] = baseline_auroc;
    j["baseline_auprc"] = baseline_auprc;
    j["n_pos"] = n_pos;
    j["n_neg"] = n_neg;
    j["target_timestep"] = target_timestep;
    j["seeds"] = {{"sampling", config.seed_sampling}, {"model", config.seed_model}};
    j["loss_trace"] = loss_trace;
    j["warnings"] = warnings;
    nlohmann::ordered_json cfg_json;
    for (const auto& [key, value] : config.to_flat()) cfg_json[key] = value;
    j["config"] = cfg_json;
    return j.dump(2) + "\n";
}

RunConfig EvalReport::config_from_json(const std::string& report_json) {
    const auto j = nlohmann::json::parse(report_json);
    if (!j.contains("config") || !j["config"].is_object())
        throw std::invalid_argument("report JSON has no config object");
    std::map<std::string, std::string> entries;
    for (const auto& [key, value] : j["config"].items())
        entries[key] = value.get<std::string>();
    return RunConfig::from_flat(entries);
}

TemporalGraph load_dataset(const RunConfig& cfg) {
    if (cfg.dataset.empty()) throw std::invalid_argument("no dataset path configured");
    std::ifstream in(cfg.dataset);
    if (!in) throw MissingInputError(cfg.dataset);
    if (cfg.format == "kingraph") return load_graph(in, cfg.dataset);
    const auto events = parse_edge_events(in, event_format_from_name(cfg.format), cfg.dataset);
    return bin_snapshots(events, cfg.bins, cfg.overlap);
}

ExperimentOutput run_experiment_full(const TemporalGraph& g, const RunConfig& cfg) {
    cfg.validate();
    std::vector<std::string> warnings;

    TemporalSplit split = stage("split", [&] {
        return temporal_split(g, cfg.split_mode == "ratio"
                                     ? SplitSpec::ratio(cfg.split_fraction)
                                     : SplitSpec::holdout(cfg.split_timestep));
    });

    TemporalGraph train = stage("series", [&] {
        return cfg.series_length > 0 ? trailing_window(split.train, cfg.series_length)
                                     : std::move(split.train);
    });

    EmbeddingSequence emb = stage("embedding", [&] {
        if (cfg.embedding_backend == "builtin") {
            AlignedEmbedderConfig ecfg;
            ecfg.dim = cfg.dim;
            return embed_aligned(train, ecfg, &warnings);
        }
        std::ifstream in(cfg.embedding_file);
        if (!in) throw MissingInputError(cfg.embedding_file);
        const auto loaded = load_embeddings(in, cfg.embedding_file);
        EmbeddingSequence full = align_embeddings_to_registry(loaded, train.registry());
        // File step i corresponds to dataset snapshot i; keep the steps that
        // line up with the (possibly truncated) training window.
        const std::size_t train_end = split.target.index();
        if (full.num_timesteps() < train_end)
            throw std::invalid_argument("embeddings file covers " +
                                        std::to_string(full.num_timesteps()) +
                                        " timesteps, need " + std::to_string(train_end));
        const std::size_t count = train.num_snapshots();
        EmbeddingSequence window;
        window.steps.assign(full.steps.begin() + static_cast<std::ptrdiff_t>(train_end - count),
                            full.steps.begin() + static_cast<std::ptrdiff_t>(train_end));
        if (window.dim() != cfg.dim)
            throw std::invalid_argument("embeddings file dimension " +
                                        std::to_string(window.dim()) +
                                        " does not match configured dim " + std::to_string(cfg.dim));
        return window;
    });

    std::vector<Eigen::MatrixXd> vels = stage("velocities", [&] { return velocities(emb); });

    PredictorSpec pspec;
    pspec.kind = predictor_kind_from_name(cfg.predictor);
    pspec.layer_sizes = cfg.predictor_layers;
    if (pspec.kind == PredictorKind::recurrent) pspec.layer_sizes.push_back(cfg.dim);
    pspec.input_window = cfg.effective_window();
    pspec.seed = cfg.seed_model;
    pspec.train.epochs = cfg.train_epochs;
    pspec.train.step_size = cfg.train_step;
    pspec.train.batch = cfg.train_batch;
    pspec.train.gradient_clip = cfg.train_clip;

    ExperimentOutput out;
    out.registry = g.registry();

    out.predictor = stage("predictor", [&] { return VelocityPredictor::fit(pspec, vels); });
    const std::size_t threads = resolve_threads(cfg.threads);
    Eigen::MatrixXd predicted =
        stage("predictor", [&] { return out.predictor.predict_all(vels, threads); });

    out.locations = stage("kinematics", [&] {
        return predict_locations(emb, predicted, cfg.history,
                                 train.snapshot(train.num_snapshots() - 1));
    });

    LabeledPairSet labeled = stage("sampling", [&] {
        std::set<NodeId> cohort;
        for (NodeId p = 0; p < g.num_nodes(); ++p) cohort.insert(p);
        return sample_labeled_pairs(g, split.target, cohort, cfg.seed_sampling);
    });

    out.scored = stage("scoring", [&] { return score_pairs(out.locations, labeled); });
    out.baseline_scored =
        stage("scoring", [&] { return score_pairs(final_positions(emb), labeled); });

    stage("metrics", [&] {
        out.report.auroc = auroc(out.scored);
        out.report.auprc = auprc(out.scored);
        out.report.baseline_auroc = auroc(out.baseline_scored);
        out.report.baseline_auprc = auprc(out.baseline_scored);
        return 0;
    });

    out.report.n_pos = labeled.num_positive();
    out.report.n_neg = labeled.num_negative();
    out.report.target_timestep = split.target.index();
    out.report.config = cfg;
    out.report.loss_trace = out.predictor.loss_trace();
    out.report.warnings = std::move(warnings);
    return out;
}

EvalReport run_experiment(const TemporalGraph& g, const RunConfig& cfg) {
    return run_experiment_full(g, cfg).report;
}

std::vector<EvalReport> run_sweep(const TemporalGraph& g, const SweepSpec& spec,
                                  std::vector<std::string>* warnings) {
    if (spec.parameter != "dim" && spec.parameter != "series_length" && spec.parameter != "history")
        throw std::invalid_argument("sweep parameter must be dim, series_length or history");
    if (spec.values.empty()) throw std::invalid_argument("sweep needs at least one value");
    if (spec.repeats == 0) throw std::invalid_argument("repeats must be at least 1");

    std::vector<std::size_t> values;
    for (std::size_t v : spec.values) {
        if (std::find(values.begin(), values.end(), v) != values.end()) {
            if (warnings)
                warnings->push_back("duplicate sweep value " + std::to_string(v) + " dropped");
            continue;
        }
        values.push_back(v);
    }

    const std::set<std::size_t> studied_dim = {32, 64, 128, 256};
    const std::set<std::size_t> studied_l = {6, 9, 12, 15};
    const std::set<std::size_t> studied_h = {2, 3, 4, 5, 6, 7, 8, 9};
    const auto& studied = spec.parameter == "dim" ? studied_dim
                          : spec.parameter == "series_length" ? studied_l
                                                              : studied_h;

    std::vector<EvalReport> reports;
    for (std::size_t value : values) {
        for (std::size_t rep = 0; rep < spec.repeats; ++rep) {
            RunConfig cfg = spec.base;
            if (spec.parameter == "dim") cfg.dim = value;
            else if (spec.parameter == "series_length") cfg.series_length = value;
            else cfg.history = value;
            cfg.seed_sampling = spec.base.seed_sampling + rep;  // repeats resample negatives only
            try {
                EvalReport report = run_experiment(g, cfg);
                if (!studied.count(value))
                    report.warnings.push_back("value " + std::to_string(value) + " for " +
                                              spec.parameter +
                                              " is outside the studied range (extrapolation)");
                reports.push_back(std::move(report));
            } catch (const std::exception& ex) {
                throw StageError("sweep " + spec.parameter + "=" + std::to_string(value) +
                                     " repeat " + std::to_string(rep),
                                 ex.what());
            }
        }
    }
    return reports;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<EvalReport>& reports) {
    out << "param,value,repeat,auroc,auprc,n_pos,n_neg,seed\n";
    for (const auto& report : reports) {
        const std::size_t value = spec.parameter == "dim" ? report.config.dim
                                  : spec.parameter == "series_length" ? report.config.series_length
                                                                      : report.config.history;
        const std::uint64_t repeat = report.config.seed_sampling - spec.base.seed_sampling;
        out << spec.parameter << ',' << value << ',' << repeat << ',' << format_double(report.auroc)
            << ',' << format_double(report.auprc) << ',' << report.n_pos << ',' << report.n_neg
            << ',' << report.config.seed_sampling << '\n';
    }
}

}  // namespace kinemb
