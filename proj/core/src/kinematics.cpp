#include "kinemb/kinematics.hpp"

#include <stdexcept>
#include <string>

namespace kinemb {

namespace {

template <typename Mat>
Mat weighted_window_mean(const std::vector<Mat>& window) {
    if (window.empty()) throw std::invalid_argument("empty velocity window");
    const auto h = window.size();
    for (const auto& m : window)
        if (m.rows() != window[0].rows() || m.cols() != window[0].cols())
            throw std::invalid_argument("velocity window entries differ in shape");
    Mat acc = Mat::Zero(window[0].rows(), window[0].cols());
    for (std::size_t eta = 1; eta <= h; ++eta)
        acc += static_cast<double>(eta) * window[eta - 1];
    const double norm = 2.0 / (static_cast<double>(h) * static_cast<double>(h + 1));
    return norm * acc;
}

}  // namespace

std::vector<Eigen::MatrixXd> velocities(const EmbeddingSequence& seq) {
    if (seq.num_timesteps() < 2)
        throw std::invalid_argument("need at least 2 embedded timesteps to form velocities");
    std::vector<Eigen::MatrixXd> out;
    out.reserve(seq.num_timesteps() - 1);
    for (std::size_t i = 1; i < seq.num_timesteps(); ++i)
        out.push_back(seq.steps[i] - seq.steps[i - 1]);
    return out;
}

Eigen::MatrixXd recency_weighted_average(const std::vector<Eigen::MatrixXd>& window) {
    return weighted_window_mean(window);
}

Eigen::RowVectorXd recency_weighted_average(const std::vector<Eigen::RowVectorXd>& window) {
    return weighted_window_mean(window);
}

Eigen::MatrixXd advance_positions(const Eigen::MatrixXd& positions,
                                  const Eigen::MatrixXd& aggregated_velocity) {
    if (positions.rows() != aggregated_velocity.rows() ||
        positions.cols() != aggregated_velocity.cols())
        throw std::invalid_argument("positions and velocity differ in shape");
    return positions + aggregated_velocity;
}

Eigen::MatrixXd neighborhood_average(const Eigen::MatrixXd& positions, const Snapshot& s) {
    const auto n = positions.rows();
    Eigen::MatrixXd out(n, positions.cols());
    for (Eigen::Index p = 0; p < n; ++p) {
        Eigen::RowVectorXd acc = positions.row(p);
        const auto nbrs = s.neighbors(static_cast<NodeId>(p));
        for (NodeId q : nbrs) acc += positions.row(static_cast<Eigen::Index>(q));
        out.row(p) = acc / static_cast<double>(nbrs.size() + 1);
    }
    return out;
}

Eigen::MatrixXd predict_locations(const EmbeddingSequence& seq,
                                  const Eigen::MatrixXd& predicted_velocity, std::size_t history,
                                  const Snapshot& neighbor_snapshot) {
    if (history == 0) throw std::invalid_argument("history must be at least 1");
    const auto vels = velocities(seq);
    if (history - 1 > vels.size())
        throw std::invalid_argument("history " + std::to_string(history) + " needs " +
                                    std::to_string(history - 1) + " observed velocities, have " +
                                    std::to_string(vels.size()));
    if (predicted_velocity.rows() != static_cast<Eigen::Index>(seq.num_nodes()) ||
        predicted_velocity.cols() != static_cast<Eigen::Index>(seq.dim()))
        throw std::invalid_argument("predicted velocity shape mismatch");

    std::vector<Eigen::MatrixXd> window;
    window.reserve(history);
    for (std::size_t k = vels.size() - (history - 1); k < vels.size(); ++k)
        window.push_back(vels[k]);
    window.push_back(predicted_velocity);

    const Eigen::MatrixXd agg = recency_weighted_average(window);
    const Eigen::MatrixXd advanced = advance_positions(seq.steps.back(), agg);
    return neighborhood_average(advanced, neighbor_snapshot);
}

}  // namespace kinemb
