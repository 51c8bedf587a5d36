#include "kinemb/scoring.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace kinemb {

namespace {

std::vector<ScoredPair> score_common(const Eigen::MatrixXd& locations,
                                     std::vector<ScoredPair> out) {
    if (out.empty()) throw std::invalid_argument("no pairs to score");
    const auto n = locations.rows();
    double raw_min = 1.0, raw_max = 0.0;
    for (auto& sp : out) {
        if (sp.u >= n || sp.v >= n)
            throw std::out_of_range("pair references node beyond location rows");
        sp.distance = (locations.row(sp.u) - locations.row(sp.v)).norm();
        sp.score = 1.0 / (1.0 + sp.distance);  // raw similarity, rescaled below
        raw_min = std::min(raw_min, sp.score);
        raw_max = std::max(raw_max, sp.score);
    }
    const double span = raw_max - raw_min;
    for (auto& sp : out) sp.score = span > 0.0 ? (sp.score - raw_min) / span : 0.5;
    return out;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string full_precision(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<ScoredPair> score_pairs(const Eigen::MatrixXd& locations,
                                    const std::vector<std::pair<NodeId, NodeId>>& pairs) {
    std::vector<ScoredPair> out;
    out.reserve(pairs.size());
    for (const auto& [u, v] : pairs) out.push_back({u, v, 0.0, 0.0, 0});
    return score_common(locations, std::move(out));
}

std::vector<ScoredPair> score_pairs(const Eigen::MatrixXd& locations, const LabeledPairSet& pairs) {
    std::vector<ScoredPair> out;
    out.reserve(pairs.pairs.size());
    for (const auto& lp : pairs.pairs) out.push_back({lp.u, lp.v, 0.0, 0.0, lp.label});
    return score_common(locations, std::move(out));
}

std::vector<ScoredPair> rank_candidates(std::vector<ScoredPair> scored, std::size_t k) {
    if (k > scored.size())
        throw std::invalid_argument("k = " + std::to_string(k) + " exceeds " +
                                    std::to_string(scored.size()) + " scored pairs");
    std::sort(scored.begin(), scored.end(), [](const ScoredPair& a, const ScoredPair& b) {
        if (a.score != b.score) return a.score > b.score;
        const auto a_lo = std::min(a.u, a.v), a_hi = std::max(a.u, a.v);
        const auto b_lo = std::min(b.u, b.v), b_hi = std::max(b.u, b.v);
        if (a_lo != b_lo) return a_lo < b_lo;
        return a_hi < b_hi;
    });
    scored.resize(k);
    return scored;
}

void write_scored_csv(std::ostream& out, const std::vector<ScoredPair>& scored,
                      const NodeRegistry& registry) {
    out << "u_label,v_label,distance,score,label\n";
    for (const auto& sp : scored) {
        out << csv_field(registry.label_of(sp.u)) << ',' << csv_field(registry.label_of(sp.v))
            << ',' << full_precision(sp.distance) << ',' << full_precision(sp.score) << ',';
        if (sp.label > 0)
            out << "+1";
        else if (sp.label < 0)
            out << "-1";
        out << '\n';
    }
}

}  // namespace kinemb
