#pragma once

#include <Eigen/Dense>
#include <vector>

#include "kinemb/embedding.hpp"
#include "kinemb/temporal_graph.hpp"

namespace kinemb {

/// Per-step displacement fields: result[i] is positions(t=i+1) - positions(t=i),
/// so a T-step embedding sequence yields T-1 velocity matrices.
std::vector<Eigen::MatrixXd> velocities(const EmbeddingSequence& seq);

/// Recency-weighted average of a window ordered oldest -> newest: entry eta
/// (1-based) gets weight eta, normalized by 2/(h*(h+1)) so weights sum to 1.
Eigen::MatrixXd recency_weighted_average(const std::vector<Eigen::MatrixXd>& window);
Eigen::RowVectorXd recency_weighted_average(const std::vector<Eigen::RowVectorXd>& window);

/// One explicit integration step: next position = current + aggregated velocity.
Eigen::MatrixXd advance_positions(const Eigen::MatrixXd& positions,
                                  const Eigen::MatrixXd& aggregated_velocity);

/// Smooths each node's position with its one-hop neighborhood in `s`:
/// row p becomes the mean over {p} union N(p).
Eigen::MatrixXd neighborhood_average(const Eigen::MatrixXd& positions, const Snapshot& s);

/// Full forecast chain for the step after the last embedded snapshot:
/// take the history-1 most recent observed velocities plus `predicted_velocity`,
/// recency-average them, advance the last positions, then neighborhood-smooth
/// using `neighbor_snapshot` (normally the last observed snapshot).
Eigen::MatrixXd predict_locations(const EmbeddingSequence& seq,
                                  const Eigen::MatrixXd& predicted_velocity, std::size_t history,
                                  const Snapshot& neighbor_snapshot);

}  // namespace kinemb
