#include "kinemb/predictor.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "kinemb/errors.hpp"
#include "kinemb/util.hpp"

namespace kinemb {

namespace {

void check_steps(const std::vector<Eigen::MatrixXd>& steps) {
    if (steps.empty()) throw std::invalid_argument("no velocity steps");
    for (const auto& m : steps)
        if (m.rows() != steps[0].rows() || m.cols() != steps[0].cols())
            throw std::invalid_argument("velocity steps differ in shape");
}

std::vector<Eigen::RowVectorXd> node_history(const std::vector<Eigen::MatrixXd>& steps,
                                             Eigen::Index p) {
    std::vector<Eigen::RowVectorXd> h;
    h.reserve(steps.size());
    for (const auto& m : steps) h.push_back(m.row(p));
    return h;
}

std::string hexfloat(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

double parse_hexfloat(const std::string& field, const std::string& source, std::size_t line) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + field.size())
        throw ParseError(source, line, "bad numeric field '" + field + "'");
    return v;
}

}  // namespace

PredictorKind predictor_kind_from_name(const std::string& name) {
    if (name == "recurrent") return PredictorKind::recurrent;
    if (name == "persistence") return PredictorKind::persistence;
    if (name == "linear-extrapolation") return PredictorKind::linear_extrapolation;
    if (name == "exponential-smoothing") return PredictorKind::exponential_smoothing;
    throw std::invalid_argument(
        "unknown predictor '" + name +
        "' (expected recurrent, persistence, linear-extrapolation or exponential-smoothing)");
}

std::string predictor_kind_name(PredictorKind kind) {
    switch (kind) {
        case PredictorKind::recurrent: return "recurrent";
        case PredictorKind::persistence: return "persistence";
        case PredictorKind::linear_extrapolation: return "linear-extrapolation";
        case PredictorKind::exponential_smoothing: return "exponential-smoothing";
    }
    throw std::logic_error("unreachable predictor kind");
}

VelocityPredictor VelocityPredictor::fit(const PredictorSpec& spec,
                                         const std::vector<Eigen::MatrixXd>& velocity_steps) {
    check_steps(velocity_steps);
    VelocityPredictor out;
    out.spec_ = spec;
    if (spec.kind != PredictorKind::recurrent) return out;

    if (spec.input_window < 2)
        throw std::invalid_argument("recurrent predictor needs input_window >= 2");
    const auto dim = velocity_steps[0].cols();
    const auto num_nodes = velocity_steps[0].rows();
    const std::size_t window = spec.input_window;
    if (velocity_steps.size() < window + 1)
        throw std::invalid_argument("need at least input_window + 1 = " +
                                    std::to_string(window + 1) + " velocity steps to train, have " +
                                    std::to_string(velocity_steps.size()));

    out.mean_ = Eigen::VectorXd::Zero(dim);
    out.scale_ = Eigen::VectorXd::Ones(dim);
    const double total_rows = static_cast<double>(num_nodes * velocity_steps.size());
    for (const auto& m : velocity_steps) out.mean_ += m.colwise().sum().transpose();
    out.mean_ /= total_rows;
    Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
    for (const auto& m : velocity_steps)
        var += (m.rowwise() - out.mean_.transpose()).array().square().colwise().sum().matrix().transpose();
    var /= total_rows;
    for (Eigen::Index k = 0; k < dim; ++k)
        out.scale_(k) = var(k) > 0.0 ? std::sqrt(var(k)) : 1.0;

    auto standardize = [&](const Eigen::RowVectorXd& v) -> Eigen::VectorXd {
        return ((v.transpose() - out.mean_).array() / out.scale_.array()).matrix();
    };

    std::vector<TrainSample> dataset;
    for (Eigen::Index p = 0; p < num_nodes; ++p) {
        for (std::size_t start = 0; start + window < velocity_steps.size(); ++start) {
            TrainSample s;
            s.window.reserve(window);
            for (std::size_t k = 0; k < window; ++k)
                s.window.push_back(standardize(velocity_steps[start + k].row(p)));
            s.target = standardize(velocity_steps[start + window].row(p));
            dataset.push_back(std::move(s));
        }
    }

    std::vector<std::size_t> sizes = spec.layer_sizes;
    if (sizes.empty()) sizes = {64, 32, static_cast<std::size_t>(dim)};
    if (sizes.back() != static_cast<std::size_t>(dim))
        throw std::invalid_argument("last layer width " + std::to_string(sizes.back()) +
                                    " must equal velocity dimension " + std::to_string(dim));
    out.model_ = RecurrentModel(static_cast<std::size_t>(dim), sizes, spec.seed);
    out.loss_trace_ =
        train(out.model_, dataset, spec.train, spec.seed ^ 0x9e3779b97f4a7c15ULL).loss_trace;
    return out;
}

Eigen::RowVectorXd VelocityPredictor::predict_one(
    const std::vector<Eigen::RowVectorXd>& history) const {
    if (history.empty()) throw std::invalid_argument("empty velocity history");
    const auto dim = history.back().size();
    switch (spec_.kind) {
        case PredictorKind::persistence:
            return history.back();
        case PredictorKind::linear_extrapolation: {
            if (history.size() < 2)
                throw std::invalid_argument("linear extrapolation needs 2 trailing velocities");
            return 2.0 * history[history.size() - 1] - history[history.size() - 2];
        }
        case PredictorKind::exponential_smoothing: {
            const std::size_t window = spec_.input_window;
            if (history.size() < window)
                throw std::invalid_argument("exponential smoothing needs " +
                                            std::to_string(window) +
                                            " trailing velocities, have " +
                                            std::to_string(history.size()));
            Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(dim);
            double weight_sum = 0.0;
            for (std::size_t age = 0; age < window; ++age) {
                const double w = std::pow(0.5, static_cast<double>(age));
                acc += w * history[history.size() - 1 - age];
                weight_sum += w;
            }
            return acc / weight_sum;
        }
        case PredictorKind::recurrent: {
            if (history.size() < spec_.input_window)
                throw std::invalid_argument("recurrent predictor needs " +
                                            std::to_string(spec_.input_window) +
                                            " trailing velocities, have " +
                                            std::to_string(history.size()));
            std::vector<Eigen::VectorXd> seq;
            seq.reserve(spec_.input_window);
            for (std::size_t k = history.size() - spec_.input_window; k < history.size(); ++k)
                seq.push_back(((history[k].transpose() - mean_).array() / scale_.array()).matrix());
            const Eigen::VectorXd y = model_.forward(seq);
            return (y.array() * scale_.array() + mean_.array()).transpose();
        }
    }
    throw std::logic_error("unreachable predictor kind");
}

Eigen::MatrixXd VelocityPredictor::predict_all(const std::vector<Eigen::MatrixXd>& velocity_steps,
                                               std::size_t threads) const {
    check_steps(velocity_steps);
    const auto num_nodes = velocity_steps[0].rows();
    Eigen::MatrixXd out(num_nodes, velocity_steps[0].cols());
    parallel_for(static_cast<std::size_t>(num_nodes), threads,
                 [&](std::size_t begin, std::size_t end) {
                     for (std::size_t p = begin; p < end; ++p)
                         out.row(static_cast<Eigen::Index>(p)) =
                             predict_one(node_history(velocity_steps, static_cast<Eigen::Index>(p)));
                 });
    return out;
}

void VelocityPredictor::save(std::ostream& out) const {
    out << "KINMODEL v1\n";
    out << "kind " << predictor_kind_name(spec_.kind) << "\n";
    out << "seed " << spec_.seed << "\n";
    out << "input_window " << spec_.input_window << "\n";
    if (spec_.kind != PredictorKind::recurrent) return;
    out << "input_dim " << model_.input_dim() << "\n";
    out << "layers";
    for (std::size_t h : model_.layer_sizes()) out << ' ' << h;
    out << "\n";
    out << "mean";
    for (Eigen::Index k = 0; k < mean_.size(); ++k) out << ' ' << hexfloat(mean_(k));
    out << "\n";
    out << "scale";
    for (Eigen::Index k = 0; k < scale_.size(); ++k) out << ' ' << hexfloat(scale_(k));
    out << "\n";
    const Eigen::VectorXd theta = model_.parameters();
    out << "params " << theta.size() << "\n";
    for (Eigen::Index k = 0; k < theta.size(); ++k) out << hexfloat(theta(k)) << "\n";
}

VelocityPredictor VelocityPredictor::load(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line)) throw ParseError(source_name, lineno + 1, "unexpected end of file");
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    auto split = [](const std::string& s) {
        std::vector<std::string> fields;
        std::istringstream iss(s);
        std::string f;
        while (iss >> f) fields.push_back(f);
        return fields;
    };
    auto expect_key = [&](const std::vector<std::string>& fields, const char* key,
                          std::size_t count) {
        if (fields.empty() || fields[0] != key || (count != 0 && fields.size() != count))
            throw ParseError(source_name, lineno, std::string("expected '") + key + "' record");
    };

    if (next_line() != "KINMODEL v1")
        throw ParseError(source_name, lineno, "expected header 'KINMODEL v1'");

    VelocityPredictor out;
    auto fields = split(next_line());
    expect_key(fields, "kind", 2);
    out.spec_.kind = predictor_kind_from_name(fields[1]);

    fields = split(next_line());
    expect_key(fields, "seed", 2);
    out.spec_.seed = std::strtoull(fields[1].c_str(), nullptr, 10);

    fields = split(next_line());
    expect_key(fields, "input_window", 2);
    out.spec_.input_window = std::strtoull(fields[1].c_str(), nullptr, 10);

    if (out.spec_.kind != PredictorKind::recurrent) return out;

    fields = split(next_line());
    expect_key(fields, "input_dim", 2);
    const auto input_dim = static_cast<std::size_t>(std::strtoull(fields[1].c_str(), nullptr, 10));

    fields = split(next_line());
    expect_key(fields, "layers", 0);
    if (fields.size() < 2) throw ParseError(source_name, lineno, "expected 'layers' record");
    std::vector<std::size_t> sizes;
    for (std::size_t k = 1; k < fields.size(); ++k)
        sizes.push_back(static_cast<std::size_t>(std::strtoull(fields[k].c_str(), nullptr, 10)));
    out.spec_.layer_sizes = sizes;

    fields = split(next_line());
    expect_key(fields, "mean", 0);
    out.mean_.resize(static_cast<Eigen::Index>(fields.size() - 1));
    for (std::size_t k = 1; k < fields.size(); ++k)
        out.mean_(static_cast<Eigen::Index>(k - 1)) = parse_hexfloat(fields[k], source_name, lineno);

    fields = split(next_line());
    expect_key(fields, "scale", 0);
    out.scale_.resize(static_cast<Eigen::Index>(fields.size() - 1));
    for (std::size_t k = 1; k < fields.size(); ++k)
        out.scale_(static_cast<Eigen::Index>(k - 1)) = parse_hexfloat(fields[k], source_name, lineno);

    fields = split(next_line());
    expect_key(fields, "params", 2);
    const auto n_params = static_cast<std::size_t>(std::strtoull(fields[1].c_str(), nullptr, 10));

    out.model_ = RecurrentModel(input_dim, sizes, out.spec_.seed);
    if (out.model_.num_parameters() != n_params)
        throw ParseError(source_name, lineno,
                         "params count " + std::to_string(n_params) + " does not match shape (" +
                             std::to_string(out.model_.num_parameters()) + ")");
    Eigen::VectorXd theta(static_cast<Eigen::Index>(n_params));
    for (std::size_t k = 0; k < n_params; ++k)
        theta(static_cast<Eigen::Index>(k)) = parse_hexfloat(next_line(), source_name, lineno);
    out.model_.set_parameters(theta);

    if (static_cast<std::size_t>(out.mean_.size()) != input_dim ||
        static_cast<std::size_t>(out.scale_.size()) != input_dim)
        throw ParseError(source_name, lineno, "standardization width does not match input_dim");
    return out;
}

}  // namespace kinemb
