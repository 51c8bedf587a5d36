#include "kinemb/recurrent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "kinemb/errors.hpp"

namespace kinemb {

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) {
    return 1.0 / (1.0 + (-z.array()).exp());
}

struct StepCache {
    Eigen::VectorXd x, h_prev, c_prev;
    Eigen::VectorXd i, f, g, o, c, tanh_c, h;
};

// Runs one layer over the whole sequence, recording everything the backward
// pass needs.
std::vector<StepCache> run_layer(const LstmLayer& layer,
                                 const std::vector<Eigen::VectorXd>& inputs) {
    const Eigen::Index hidden = layer.hidden_size();
    std::vector<StepCache> steps;
    steps.reserve(inputs.size());
    Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(hidden);
    for (const auto& x : inputs) {
        if (x.size() != layer.input_size())
            throw std::invalid_argument("input width " + std::to_string(x.size()) +
                                        " does not match layer input size " +
                                        std::to_string(layer.input_size()));
        StepCache s;
        s.x = x;
        s.h_prev = h;
        s.c_prev = c;
        const Eigen::VectorXd z = layer.w * x + layer.u * h + layer.b;
        s.i = sigmoid(z.segment(0, hidden));
        s.f = sigmoid(z.segment(hidden, hidden));
        s.g = z.segment(2 * hidden, hidden).array().tanh();
        s.o = sigmoid(z.segment(3 * hidden, hidden));
        s.c = s.f.cwiseProduct(c) + s.i.cwiseProduct(s.g);
        s.tanh_c = s.c.array().tanh();
        s.h = s.o.cwiseProduct(s.tanh_c);
        h = s.h;
        c = s.c;
        steps.push_back(std::move(s));
    }
    return steps;
}

struct LayerGrads {
    Eigen::MatrixXd w, u;
    Eigen::VectorXd b;
};

// BPTT through one layer. `dh_seq` carries the loss gradient on this layer's
// hidden state at every step; returns the gradient on the layer's inputs.
std::vector<Eigen::VectorXd> backward_layer(const LstmLayer& layer,
                                            const std::vector<StepCache>& steps,
                                            const std::vector<Eigen::VectorXd>& dh_seq,
                                            LayerGrads& grads) {
    const Eigen::Index hidden = layer.hidden_size();
    std::vector<Eigen::VectorXd> dx_seq(steps.size());
    Eigen::VectorXd dh_rec = Eigen::VectorXd::Zero(hidden);
    Eigen::VectorXd dc = Eigen::VectorXd::Zero(hidden);
    for (std::size_t t = steps.size(); t-- > 0;) {
        const StepCache& s = steps[t];
        const Eigen::VectorXd dh = dh_seq[t] + dh_rec;
        const Eigen::VectorXd d_o = dh.cwiseProduct(s.tanh_c);
        dc += dh.cwiseProduct(s.o).cwiseProduct(
            (1.0 - s.tanh_c.array().square()).matrix());
        const Eigen::VectorXd d_i = dc.cwiseProduct(s.g);
        const Eigen::VectorXd d_g = dc.cwiseProduct(s.i);
        const Eigen::VectorXd d_f = dc.cwiseProduct(s.c_prev);

        Eigen::VectorXd dz(4 * hidden);
        dz.segment(0, hidden) = d_i.cwiseProduct(s.i).cwiseProduct((1.0 - s.i.array()).matrix());
        dz.segment(hidden, hidden) =
            d_f.cwiseProduct(s.f).cwiseProduct((1.0 - s.f.array()).matrix());
        dz.segment(2 * hidden, hidden) = d_g.cwiseProduct((1.0 - s.g.array().square()).matrix());
        dz.segment(3 * hidden, hidden) =
            d_o.cwiseProduct(s.o).cwiseProduct((1.0 - s.o.array()).matrix());

        grads.w.noalias() += dz * s.x.transpose();
        grads.u.noalias() += dz * s.h_prev.transpose();
        grads.b += dz;
        dx_seq[t] = layer.w.transpose() * dz;
        dh_rec = layer.u.transpose() * dz;
        dc = dc.cwiseProduct(s.f);
    }
    return dx_seq;
}

std::vector<LayerGrads> zero_grads(const RecurrentModel& m) {
    std::vector<LayerGrads> grads;
    grads.reserve(m.layers().size());
    for (const auto& layer : m.layers())
        grads.push_back({Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()),
                         Eigen::MatrixXd::Zero(layer.u.rows(), layer.u.cols()),
                         Eigen::VectorXd::Zero(layer.b.size())});
    return grads;
}

// Forward + backward for one sample; accumulates parameter gradients of the
// *sum* of squared errors scaled by `scale` (callers fold in the 1/(B*D)).
void accumulate_sample(const RecurrentModel& m, const TrainSample& sample, double scale,
                       std::vector<LayerGrads>& grads, double* loss_out) {
    if (sample.window.empty()) throw std::invalid_argument("empty training window");
    std::vector<std::vector<StepCache>> caches;
    caches.reserve(m.layers().size());
    std::vector<Eigen::VectorXd> inputs = sample.window;
    for (const auto& layer : m.layers()) {
        caches.push_back(run_layer(layer, inputs));
        inputs.clear();
        for (const auto& s : caches.back()) inputs.push_back(s.h);
    }
    const Eigen::VectorXd& y = caches.back().back().h;
    if (sample.target.size() != y.size())
        throw std::invalid_argument("target width " + std::to_string(sample.target.size()) +
                                    " does not match model output " + std::to_string(y.size()));
    const Eigen::VectorXd err = y - sample.target;
    if (loss_out) *loss_out += err.squaredNorm();

    // d(loss)/dy for squared error, scaled.
    std::vector<Eigen::VectorXd> dh_seq(sample.window.size());
    for (std::size_t t = 0; t < dh_seq.size(); ++t)
        dh_seq[t] = Eigen::VectorXd::Zero(m.layers().back().hidden_size());
    dh_seq.back() = 2.0 * scale * err;

    for (std::size_t li = m.layers().size(); li-- > 0;) {
        dh_seq = backward_layer(m.layers()[li], caches[li], dh_seq, grads[li]);
    }
}

Eigen::VectorXd flatten_grads(const RecurrentModel& m, const std::vector<LayerGrads>& grads) {
    Eigen::VectorXd flat(static_cast<Eigen::Index>(m.num_parameters()));
    Eigen::Index at = 0;
    for (const auto& g : grads) {
        for (Eigen::Index r = 0; r < g.w.rows(); ++r)
            for (Eigen::Index c = 0; c < g.w.cols(); ++c) flat(at++) = g.w(r, c);
        for (Eigen::Index r = 0; r < g.u.rows(); ++r)
            for (Eigen::Index c = 0; c < g.u.cols(); ++c) flat(at++) = g.u(r, c);
        for (Eigen::Index r = 0; r < g.b.size(); ++r) flat(at++) = g.b(r);
    }
    return flat;
}

}  // namespace

RecurrentModel::RecurrentModel(std::size_t input_dim, const std::vector<std::size_t>& layer_sizes,
                               std::uint64_t seed)
    : input_dim_(input_dim), seed_(seed) {
    if (input_dim == 0) throw std::invalid_argument("input dimension must be positive");
    if (layer_sizes.empty()) throw std::invalid_argument("need at least one layer");
    for (std::size_t h : layer_sizes)
        if (h == 0) throw std::invalid_argument("layer widths must be positive");

    std::mt19937_64 rng(seed);
    std::size_t in = input_dim;
    for (std::size_t h : layer_sizes) {
        LstmLayer layer;
        const auto rows = static_cast<Eigen::Index>(4 * h);
        layer.w.resize(rows, static_cast<Eigen::Index>(in));
        layer.u.resize(rows, static_cast<Eigen::Index>(h));
        layer.b = Eigen::VectorXd::Zero(rows);
        layer.b.segment(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(h)).setOnes();

        std::uniform_real_distribution<double> w_dist(-1.0 / std::sqrt(static_cast<double>(in)),
                                                      1.0 / std::sqrt(static_cast<double>(in)));
        std::uniform_real_distribution<double> u_dist(-1.0 / std::sqrt(static_cast<double>(h)),
                                                      1.0 / std::sqrt(static_cast<double>(h)));
        for (Eigen::Index r = 0; r < layer.w.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.w.cols(); ++c) layer.w(r, c) = w_dist(rng);
        for (Eigen::Index r = 0; r < layer.u.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.u.cols(); ++c) layer.u(r, c) = u_dist(rng);

        layers_.push_back(std::move(layer));
        in = h;
    }
}

Eigen::VectorXd RecurrentModel::forward(const std::vector<Eigen::VectorXd>& sequence) const {
    if (sequence.empty()) throw std::invalid_argument("empty input sequence");
    if (layers_.empty()) throw std::logic_error("model has no layers");
    std::vector<Eigen::VectorXd> inputs = sequence;
    for (const auto& layer : layers_) {
        auto steps = run_layer(layer, inputs);
        inputs.clear();
        for (const auto& s : steps) inputs.push_back(s.h);
    }
    return inputs.back();
}

std::size_t RecurrentModel::output_dim() const {
    if (layers_.empty()) return 0;
    return static_cast<std::size_t>(layers_.back().hidden_size());
}

std::vector<std::size_t> RecurrentModel::layer_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(layers_.size());
    for (const auto& layer : layers_)
        sizes.push_back(static_cast<std::size_t>(layer.hidden_size()));
    return sizes;
}

std::size_t RecurrentModel::num_parameters() const {
    std::size_t n = 0;
    for (const auto& layer : layers_)
        n += static_cast<std::size_t>(layer.w.size() + layer.u.size() + layer.b.size());
    return n;
}

Eigen::VectorXd RecurrentModel::parameters() const {
    Eigen::VectorXd flat(static_cast<Eigen::Index>(num_parameters()));
    Eigen::Index at = 0;
    for (const auto& layer : layers_) {
        for (Eigen::Index r = 0; r < layer.w.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.w.cols(); ++c) flat(at++) = layer.w(r, c);
        for (Eigen::Index r = 0; r < layer.u.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.u.cols(); ++c) flat(at++) = layer.u(r, c);
        for (Eigen::Index r = 0; r < layer.b.size(); ++r) flat(at++) = layer.b(r);
    }
    return flat;
}

void RecurrentModel::set_parameters(const Eigen::VectorXd& flat) {
    if (flat.size() != static_cast<Eigen::Index>(num_parameters()))
        throw std::invalid_argument("parameter vector has " + std::to_string(flat.size()) +
                                    " entries, model needs " + std::to_string(num_parameters()));
    Eigen::Index at = 0;
    for (auto& layer : layers_) {
        for (Eigen::Index r = 0; r < layer.w.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.w.cols(); ++c) layer.w(r, c) = flat(at++);
        for (Eigen::Index r = 0; r < layer.u.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.u.cols(); ++c) layer.u(r, c) = flat(at++);
        for (Eigen::Index r = 0; r < layer.b.size(); ++r) layer.b(r) = flat(at++);
    }
}

double sample_loss(const RecurrentModel& m, const TrainSample& sample) {
    const Eigen::VectorXd y = m.forward(sample.window);
    if (sample.target.size() != y.size())
        throw std::invalid_argument("target width does not match model output");
    return (y - sample.target).squaredNorm() / static_cast<double>(y.size());
}

double batch_loss(const RecurrentModel& m, const std::vector<TrainSample>& batch) {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    double acc = 0.0;
    for (const auto& s : batch) acc += sample_loss(m, s);
    return acc / static_cast<double>(batch.size());
}

Eigen::VectorXd analytic_gradient(const RecurrentModel& m, const std::vector<TrainSample>& batch) {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    auto grads = zero_grads(m);
    const double scale =
        1.0 / (static_cast<double>(batch.size()) * static_cast<double>(m.output_dim()));
    for (const auto& sample : batch) accumulate_sample(m, sample, scale, grads, nullptr);
    return flatten_grads(m, grads);
}

Eigen::VectorXd analytic_gradient(const RecurrentModel& m, const TrainSample& sample) {
    return analytic_gradient(m, std::vector<TrainSample>{sample});
}

Eigen::VectorXd numeric_gradient(const RecurrentModel& m, const TrainSample& sample, double step) {
    RecurrentModel probe = m;
    Eigen::VectorXd theta = probe.parameters();
    Eigen::VectorXd grad(theta.size());
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
        const double saved = theta(k);
        theta(k) = saved + step;
        probe.set_parameters(theta);
        const double up = sample_loss(probe, sample);
        theta(k) = saved - step;
        probe.set_parameters(theta);
        const double down = sample_loss(probe, sample);
        theta(k) = saved;
        grad(k) = (up - down) / (2.0 * step);
    }
    probe.set_parameters(theta);
    return grad;
}

double max_relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw std::invalid_argument("gradient size mismatch");
    double worst = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        const double denom = std::max({std::abs(a(k)), std::abs(b(k)), 1e-8});
        worst = std::max(worst, std::abs(a(k) - b(k)) / denom);
    }
    return worst;
}

double gradient_check(const RecurrentModel& m, const TrainSample& sample) {
    return max_relative_error(analytic_gradient(m, sample), numeric_gradient(m, sample));
}

TrainResult train(RecurrentModel& m, const std::vector<TrainSample>& dataset,
                  const TrainConfig& cfg, std::uint64_t shuffle_seed) {
    if (dataset.empty()) throw std::invalid_argument("empty training dataset");
    if (cfg.epochs == 0) throw std::invalid_argument("epochs must be at least 1");
    if (!(cfg.step_size > 0.0)) throw std::invalid_argument("step size must be positive");
    if (cfg.batch == 0) throw std::invalid_argument("batch size must be positive");

    const auto n_params = static_cast<Eigen::Index>(m.num_parameters());
    Eigen::VectorXd adam_m = Eigen::VectorXd::Zero(n_params);
    Eigen::VectorXd adam_v = Eigen::VectorXd::Zero(n_params);
    std::size_t adam_t = 0;

    std::mt19937_64 rng(shuffle_seed);
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    result.loss_trace.reserve(cfg.epochs);
    const double out_dim = static_cast<double>(m.output_dim());

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_sq_err = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
            const std::size_t count = std::min(cfg.batch, order.size() - start);
            auto grads = zero_grads(m);
            const double scale = 1.0 / (static_cast<double>(count) * out_dim);
            double batch_sq_err = 0.0;
            for (std::size_t k = 0; k < count; ++k)
                accumulate_sample(m, dataset[order[start + k]], scale, grads, &batch_sq_err);
            epoch_sq_err += batch_sq_err;

            Eigen::VectorXd grad = flatten_grads(m, grads);
            const double norm = grad.norm();
            if (!std::isfinite(norm))
                throw NumericError("non-finite gradient at epoch " + std::to_string(epoch));
            if (cfg.gradient_clip > 0.0 && norm > cfg.gradient_clip)
                grad *= cfg.gradient_clip / norm;

            ++adam_t;
            adam_m = cfg.beta1 * adam_m + (1.0 - cfg.beta1) * grad;
            adam_v = cfg.beta2 * adam_v.array() + (1.0 - cfg.beta2) * grad.array().square();
            const double corr1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam_t));
            const double corr2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam_t));
            Eigen::VectorXd theta = m.parameters();
            theta.array() -= cfg.step_size * (adam_m.array() / corr1) /
                             ((adam_v.array() / corr2).sqrt() + cfg.epsilon);
            m.set_parameters(theta);
        }
        const double epoch_loss =
            epoch_sq_err / (static_cast<double>(dataset.size()) * out_dim);
        if (!std::isfinite(epoch_loss))
            throw NumericError("training loss became non-finite at epoch " + std::to_string(epoch));
        result.loss_trace.push_back(epoch_loss);
    }
    return result;
}

}  // namespace kinemb
