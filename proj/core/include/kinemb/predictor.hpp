#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kinemb/recurrent.hpp"

namespace kinemb {

enum class PredictorKind { recurrent, persistence, linear_extrapolation, exponential_smoothing };

PredictorKind predictor_kind_from_name(const std::string& name);
std::string predictor_kind_name(PredictorKind kind);

struct PredictorSpec {
    PredictorKind kind = PredictorKind::recurrent;
    std::vector<std::size_t> layer_sizes;  // recurrent only; empty -> {64, 32, output_dim}
    std::size_t input_window = 3;          // timesteps fed per sample, >= 2 for recurrent
    std::uint64_t seed = 0;
    TrainConfig train;
};

/// A resolved next-velocity forecaster. For the recurrent kind this owns a
/// trained model plus the per-dimension standardization (mean/scale computed
/// from the training velocities, applied on the way in, inverted on the way
/// out); the closed-form kinds are stateless rules.
class VelocityPredictor {
public:
    /// Builds (and for the recurrent kind trains on sliding windows pooled
    /// across nodes) a predictor from per-step velocity matrices.
    static VelocityPredictor fit(const PredictorSpec& spec,
                                 const std::vector<Eigen::MatrixXd>& velocity_steps);

    /// Forecast of every node's next velocity from its trailing window.
    /// Rows are independent, so `threads` never changes the result.
    Eigen::MatrixXd predict_all(const std::vector<Eigen::MatrixXd>& velocity_steps,
                                std::size_t threads = 1) const;

    /// Forecast for a single trailing history (rows ordered oldest -> newest).
    Eigen::RowVectorXd predict_one(const std::vector<Eigen::RowVectorXd>& history) const;

    PredictorKind kind() const { return spec_.kind; }
    const PredictorSpec& spec() const { return spec_; }
    const RecurrentModel& model() const { return model_; }
    const std::vector<double>& loss_trace() const { return loss_trace_; }

    /// "KINMODEL v1" text checkpoint; numeric payloads are hexfloats, so a
    /// load of a save is bit-identical.
    void save(std::ostream& out) const;
    static VelocityPredictor load(std::istream& in, const std::string& source_name = "<input>");

private:
    PredictorSpec spec_;
    RecurrentModel model_;
    Eigen::VectorXd mean_;
    Eigen::VectorXd scale_;
    std::vector<double> loss_trace_;
};

}  // namespace kinemb
