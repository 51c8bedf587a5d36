#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace kinemb {

/// One gated recurrent (LSTM) layer. The 4H rows of `w`, `u`, `b` hold the
/// gate blocks stacked in the order: input, forget, candidate, output.
struct LstmLayer {
    Eigen::MatrixXd w;  // 4H x I, input projection
    Eigen::MatrixXd u;  // 4H x H, recurrent projection
    Eigen::VectorXd b;  // 4H

    Eigen::Index input_size() const { return w.cols(); }
    Eigen::Index hidden_size() const { return u.cols(); }
};

/// Stacked recurrent network; the prediction is the top layer's hidden state
/// after the last input step, so the top hidden width is the output width.
class RecurrentModel {
public:
    RecurrentModel() = default;

    /// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero
    /// except the forget-gate block at +1.
    RecurrentModel(std::size_t input_dim, const std::vector<std::size_t>& layer_sizes,
                   std::uint64_t seed);

    Eigen::VectorXd forward(const std::vector<Eigen::VectorXd>& sequence) const;

    std::size_t input_dim() const { return input_dim_; }
    std::size_t output_dim() const;
    std::vector<std::size_t> layer_sizes() const;
    std::uint64_t seed() const { return seed_; }

    const std::vector<LstmLayer>& layers() const { return layers_; }
    std::vector<LstmLayer>& layers() { return layers_; }

    std::size_t num_parameters() const;
    Eigen::VectorXd parameters() const;  // per layer: w row-major, u row-major, b
    void set_parameters(const Eigen::VectorXd& flat);

private:
    std::size_t input_dim_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<LstmLayer> layers_;
};

struct TrainSample {
    std::vector<Eigen::VectorXd> window;  // oldest -> newest
    Eigen::VectorXd target;               // the step after the window
};

struct TrainConfig {
    std::size_t epochs = 200;
    double step_size = 1e-3;
    std::size_t batch = 64;
    double gradient_clip = 5.0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct TrainResult {
    std::vector<double> loss_trace;  // mean per-sample loss, one entry per epoch
};

/// Mean squared error of forward(window) against target, averaged over output
/// dimensions (and over samples for a batch).
double sample_loss(const RecurrentModel& m, const TrainSample& sample);
double batch_loss(const RecurrentModel& m, const std::vector<TrainSample>& batch);

/// Mini-batch gradient descent with adaptive moments and a global
/// gradient-norm clip; sample order reshuffles each epoch from `shuffle_seed`.
TrainResult train(RecurrentModel& m, const std::vector<TrainSample>& dataset,
                  const TrainConfig& cfg, std::uint64_t shuffle_seed);

/// Loss gradient over all parameters via backpropagation through time.
Eigen::VectorXd analytic_gradient(const RecurrentModel& m, const TrainSample& sample);
Eigen::VectorXd analytic_gradient(const RecurrentModel& m, const std::vector<TrainSample>& batch);

/// Central finite differences of the same loss.
Eigen::VectorXd numeric_gradient(const RecurrentModel& m, const TrainSample& sample,
                                 double step = 1e-5);

/// max_i |a_i - b_i| / max(|a_i|, |b_i|, 1e-8)
double max_relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Convenience: max_relative_error(analytic, numeric) for one sample.
double gradient_check(const RecurrentModel& m, const TrainSample& sample);

}  // namespace kinemb
