#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <utility>
#include <vector>

#include "kinemb/ingest.hpp"
#include "kinemb/temporal_graph.hpp"

namespace kinemb {

struct ScoredPair {
    NodeId u;
    NodeId v;
    double distance;  // Euclidean distance between the two locations
    double score;     // batch min-max rescale of 1/(1+distance), in [0,1]
    int label;        // +1 / -1, or 0 when unlabeled
};

/// Scores node pairs by proximity of their rows in `locations`. The rescale
/// is over this batch: the closest pair gets 1, the farthest 0; a batch with
/// one distinct distance (including a single pair) scores 0.5 everywhere.
std::vector<ScoredPair> score_pairs(const Eigen::MatrixXd& locations,
                                    const std::vector<std::pair<NodeId, NodeId>>& pairs);

/// Same, carrying each pair's +1/-1 label through.
std::vector<ScoredPair> score_pairs(const Eigen::MatrixXd& locations, const LabeledPairSet& pairs);

/// Top-k by descending score; equal scores order by (min id, max id).
std::vector<ScoredPair> rank_candidates(std::vector<ScoredPair> scored, std::size_t k);

/// CSV rows `u_label,v_label,distance,score,label` at full precision
/// (RFC 4180 quoting; empty label column when unlabeled).
void write_scored_csv(std::ostream& out, const std::vector<ScoredPair>& scored,
                      const NodeRegistry& registry);

}  // namespace kinemb
