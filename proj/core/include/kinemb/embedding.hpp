#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "kinemb/temporal_graph.hpp"

namespace kinemb {

/// Per-timestep node positions in a shared d-dimensional space.
/// steps[i] is an N x d matrix whose row p is the position of node p at time i.
struct EmbeddingSequence {
    std::vector<Eigen::MatrixXd> steps;

    std::size_t num_timesteps() const { return steps.size(); }
    std::size_t num_nodes() const { return steps.empty() ? 0 : static_cast<std::size_t>(steps[0].rows()); }
    std::size_t dim() const { return steps.empty() ? 0 : static_cast<std::size_t>(steps[0].cols()); }

    Eigen::RowVectorXd position(std::size_t t, NodeId p) const;
};

struct AlignedEmbedderConfig {
    std::size_t dim = 16;
};

/// Spectral embedding of each snapshot (normalized adjacency, top-|eigenvalue|
/// pairs, coordinates sqrt(|lambda|)*u), aligned across time by orthogonal
/// Procrustes over the nodes active in both snapshots. Nodes isolated in a
/// snapshot keep their previous position (zero at t=0). An edge-free snapshot
/// degrades to pure position persistence and appends a warning.
EmbeddingSequence embed_aligned(const TemporalGraph& g, const AlignedEmbedderConfig& config,
                                std::vector<std::string>* warnings = nullptr);

/// Positions at the last timestep (the non-kinematic scoring baseline input).
Eigen::MatrixXd final_positions(const EmbeddingSequence& seq);

/// Versioned text container ("KINEMB v1"): header line, then one row per
/// (timestep, node) holding the label and d coordinates at full precision.
void save_embeddings(std::ostream& out, const EmbeddingSequence& seq, const NodeRegistry& registry);

struct LoadedEmbeddings {
    EmbeddingSequence seq;
    NodeRegistry registry;  // labels in file row order
};

LoadedEmbeddings load_embeddings(std::istream& in, const std::string& source_name = "<input>");

/// Reorders rows of `loaded` so row p matches `target.label_of(p)`.
/// Every target label must be present in the file.
EmbeddingSequence align_embeddings_to_registry(const LoadedEmbeddings& loaded,
                                               const NodeRegistry& target);

}  // namespace kinemb
