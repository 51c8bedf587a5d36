#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kinemb/embedding.hpp"
#include "kinemb/ingest.hpp"
#include "kinemb/predictor.hpp"
#include "kinemb/scoring.hpp"
#include "kinemb/temporal_graph.hpp"

namespace kinemb {

/// Full pipeline configuration. Serializes to a flat key=value map whose
/// round-trip is exact, so a report's embedded config reruns bit-identically.
struct RunConfig {
    std::string dataset;
    std::string format = "triple";  // triple | coauthorship-csv | kingraph
    std::size_t bins = 9;
    double overlap = 0.0;
    std::string split_mode = "ratio";  // ratio | holdout
    double split_fraction = 0.75;
    std::size_t split_timestep = 0;
    std::string embedding_backend = "builtin";  // builtin | file
    std::string embedding_file;
    std::size_t dim = 16;
    std::size_t history = 3;        // velocities combined per forecast (h)
    std::size_t series_length = 0;  // trailing training snapshots used (0 = all)
    std::string predictor = "recurrent";
    std::vector<std::size_t> predictor_layers = {64, 32};  // hidden widths; output width = dim
    std::size_t predictor_window = 0;                      // 0 = history
    std::size_t train_epochs = 200;
    double train_step = 1e-3;
    std::size_t train_batch = 64;
    double train_clip = 5.0;
    std::uint64_t seed_sampling = 1;
    std::uint64_t seed_model = 1;
    std::size_t threads = 0;  // 0 = KINEMB_THREADS env, then hardware
    std::string out_dir = "out";

    void validate() const;  // throws std::invalid_argument on any bad field

    std::map<std::string, std::string> to_flat() const;
    static RunConfig from_flat(const std::map<std::string, std::string>& entries);

    std::size_t effective_window() const { return predictor_window > 0 ? predictor_window : history; }
};

/// Flat `key=value` config file (# comments, blank lines allowed; duplicate
/// keys rejected).
RunConfig parse_config_file(std::istream& in, const std::string& source_name = "<input>");
void write_config_file(std::ostream& out, const RunConfig& cfg);

struct EvalReport {
    double auroc = 0.0;
    double auprc = 0.0;
    double baseline_auroc = 0.0;  // final observed positions, no dynamics
    double baseline_auprc = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    std::size_t target_timestep = 0;
    RunConfig config;
    std::vector<double> loss_trace;
    std::vector<std::string> warnings;

    std::string to_json() const;
    static RunConfig config_from_json(const std::string& report_json);
};

/// Reads cfg.dataset in cfg.format; event formats are binned per cfg, the
/// kingraph format is already snapshotted.
TemporalGraph load_dataset(const RunConfig& cfg);

EvalReport run_experiment(const TemporalGraph& g, const RunConfig& cfg);

/// run_experiment plus the artifacts cmd_run writes to disk.
struct ExperimentOutput {
    EvalReport report;
    std::vector<ScoredPair> scored;           // forecast-location scores, labeled
    std::vector<ScoredPair> baseline_scored;  // final-position scores, same pairs
    Eigen::MatrixXd locations;                // forecast location per node (row = id)
    VelocityPredictor predictor;
    NodeRegistry registry;
};

ExperimentOutput run_experiment_full(const TemporalGraph& g, const RunConfig& cfg);

struct SweepSpec {
    std::string parameter;  // dim | series_length | history
    std::vector<std::size_t> values;
    std::size_t repeats = 1;
    RunConfig base;
};

/// One run per (value, repeat); repeats reseed negative sampling only.
/// Duplicate values are dropped with a warning; values outside the studied
/// ranges run but are flagged as extrapolation.
std::vector<EvalReport> run_sweep(const TemporalGraph& g, const SweepSpec& spec,
                                  std::vector<std::string>* warnings = nullptr);

/// `param,value,repeat,auroc,auprc,n_pos,n_neg,seed` rows.
void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<EvalReport>& reports);

}  // namespace kinemb
