#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "kinemb/embedding.hpp"
#include "kinemb/ingest.hpp"
#include "kinemb/synthetic.hpp"

using namespace kinemb;

namespace {

const std::string kBin = KINEMB_CLI_PATH;
const std::string kTmp = KINEMB_TEST_TMP;

struct CliResult {
    int code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string stdout_path = kTmp + "/cli_stdout.txt";
    const std::string cmd =
        "\"" + kBin + "\" " + args + " > \"" + stdout_path + "\" 2> \"" + kTmp + "/cli_stderr.txt\"";
    const int status = std::system(cmd.c_str());
    std::ifstream in(stdout_path);
    std::stringstream buf;
    buf << in.rdbuf();
#ifdef _WIN32
    return {status, buf.str()};
#else
    return {WEXITSTATUS(status), buf.str()};
#endif
}

// One small drifting-communities event file shared by the suite.
const std::string& drift_events_path() {
    static const std::string path = [] {
        DriftConfig dc;
        dc.nodes_per_community = 10;
        dc.num_snapshots = 6;
        dc.seed = 3;
        const std::string p = kTmp + "/cli_drift.tsv";
        std::ofstream out(p);
        serialize_edge_events(out, synthetic_drift_events(dc));
        return p;
    }();
    return path;
}

std::string quick_run_flags(const std::string& out_dir) {
    return "--dataset \"" + drift_events_path() +
           "\" --format triple --bins 6 --split-fraction 0.8 --dim 2 --history 2 "
           "--predictor-layers 4 --train-epochs 3 --out \"" +
           out_dir + "\"";
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage problems exit with 64") {
    CHECK(run_cli("").code == 64);
    CHECK(run_cli("frobnicate").code == 64);
    CHECK(run_cli("run --no-such-flag 1").code == 64);
    CHECK(run_cli("run --dataset x --format excel").code == 64);
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("a missing input file exits with 66") {
    CHECK(run_cli("ingest --dataset /nonexistent/events.tsv --format triple --bins 3").code == 66);
}

TEST_CASE("malformed data exits with 65") {
    const std::string bad = kTmp + "/cli_bad.tsv";
    std::ofstream(bad) << "10 alice\n";
    CHECK(run_cli("ingest --dataset \"" + bad + "\" --format triple --bins 3").code == 65);
    std::ofstream(bad) << "";  // empty file: no events
    CHECK(run_cli("ingest --dataset \"" + bad + "\" --format triple --bins 3").code == 65);
    std::remove(bad.c_str());
}

TEST_CASE("a pipeline stage failure exits with 70") {
    const std::string out_dir = kTmp + "/cli_fail";
    const int code = run_cli("run --dataset \"" + drift_events_path() +
                             "\" --format triple --bins 6 --split-fraction 0.8 --dim 2 "
                             "--history 99 --predictor persistence --out \"" +
                             out_dir + "\"")
                         .code;
    CHECK(code == 70);
}

TEST_CASE("ingest writes the graph container and a summary") {
    const std::string out_dir = kTmp + "/cli_ingest";
    CliResult r = run_cli("ingest --dataset \"" + drift_events_path() +
                          "\" --format triple --bins 6 --out \"" + out_dir + "\"");
    CHECK(r.code == 0);
    CHECK(r.out.find("nodes 20") != std::string::npos);
    CHECK(r.out.find("snapshots 6") != std::string::npos);
    REQUIRE(file_exists(out_dir + "/graph.kg"));
    CHECK(file_exists(out_dir + "/summary.txt"));
    std::ifstream in(out_dir + "/graph.kg");
    TemporalGraph g = load_graph(in, "graph.kg");
    CHECK(g.num_nodes() == 20);
    CHECK(g.num_snapshots() == 6);
}

TEST_CASE("embed writes a loadable embeddings file") {
    const std::string out_dir = kTmp + "/cli_embed";
    CliResult r = run_cli("embed --dataset \"" + drift_events_path() +
                          "\" --format triple --bins 6 --dim 2 --out \"" + out_dir + "\"");
    CHECK(r.code == 0);
    REQUIRE(file_exists(out_dir + "/embeddings.kemb"));
    std::ifstream in(out_dir + "/embeddings.kemb");
    LoadedEmbeddings emb = load_embeddings(in, "embeddings.kemb");
    CHECK(emb.seq.num_timesteps() == 6);
    CHECK(emb.seq.num_nodes() == 20);
    CHECK(emb.seq.dim() == 2);
}

TEST_CASE("run writes report, scores and model checkpoint") {
    const std::string out_dir = kTmp + "/cli_run";
    CliResult r = run_cli("run " + quick_run_flags(out_dir));
    CHECK(r.code == 0);
    CHECK(r.out.find("AUROC") != std::string::npos);
    CHECK(r.out.find("baseline AUROC") != std::string::npos);
    REQUIRE(file_exists(out_dir + "/report.json"));
    REQUIRE(file_exists(out_dir + "/scored.csv"));
    REQUIRE(file_exists(out_dir + "/model.kmodel"));
    const std::string report = slurp(out_dir + "/report.json");
    CHECK(report.find("\"auroc\"") != std::string::npos);
    CHECK(report.find("\"config\"") != std::string::npos);
    const std::string scores = slurp(out_dir + "/scored.csv");
    CHECK(scores.substr(0, 33) == "u_label,v_label,distance,score,la");
}

TEST_CASE("flags override the config file, which overrides defaults") {
    const std::string cfg_path = kTmp + "/cli_cfg.txt";
    {
        std::ofstream cfg(cfg_path);
        cfg << "dataset=" << drift_events_path() << "\n"
            << "bins=6\nsplit.fraction=0.8\ndim=3\nhistory=2\n"
            << "predictor.layers=4\ntrain.epochs=2\nout=" << kTmp << "/cli_cfg_out\n";
    }
    CliResult r = run_cli("run --config \"" + cfg_path + "\" --dim 2");
    CHECK(r.code == 0);
    const std::string report = slurp(kTmp + "/cli_cfg_out/report.json");
    CHECK(report.find("\"dim\": \"2\"") != std::string::npos);       // flag wins
    CHECK(report.find("\"history\": \"2\"") != std::string::npos);   // file wins
    CHECK(report.find("\"train.batch\": \"64\"") != std::string::npos);  // default survives
}

TEST_CASE("score ranks unlinked candidate pairs") {
    const std::string out_dir = kTmp + "/cli_score";
    CliResult r = run_cli("score " + quick_run_flags(out_dir) + " --top 5");
    CHECK(r.code == 0);
    REQUIRE(file_exists(out_dir + "/ranked.csv"));
    std::istringstream in(slurp(out_dir + "/ranked.csv"));
    std::string line;
    std::size_t rows = 0;
    std::getline(in, line);
    CHECK(line == "u_label,v_label,distance,score,label");
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 5);
}

TEST_CASE("sweep emits a csv row per value and repeat plus reports") {
    const std::string out_dir = kTmp + "/cli_sweep";
    CliResult r = run_cli("sweep " + quick_run_flags(out_dir) +
                          " --param history --values 2,3 --repeats 2");
    CHECK(r.code == 0);
    REQUIRE(file_exists(out_dir + "/sweep.csv"));
    std::istringstream in(slurp(out_dir + "/sweep.csv"));
    std::string line;
    std::size_t rows = 0;
    std::getline(in, line);  // header
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
    CHECK(file_exists(out_dir + "/report_history_2_r0.json"));
    CHECK(file_exists(out_dir + "/report_history_3_r1.json"));
}

}  // TEST_SUITE
