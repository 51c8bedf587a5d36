#include "kinemb/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "detail/escape.hpp"
#include "kinemb/errors.hpp"

namespace kinemb {

namespace {

// Column signs of an eigenvector matrix are arbitrary; pin each column so its
// largest-magnitude entry (lowest row on ties) is non-negative.
void fix_column_signs(Eigen::MatrixXd& coords) {
    for (Eigen::Index k = 0; k < coords.cols(); ++k) {
        Eigen::Index argmax = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < coords.rows(); ++r) {
            const double mag = std::abs(coords(r, k));
            if (mag > best) {
                best = mag;
                argmax = r;
            }
        }
        if (coords(argmax, k) < 0.0) coords.col(k) = -coords.col(k);
    }
}

Eigen::MatrixXd spectral_coordinates(const Snapshot& s, std::size_t num_nodes, std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(num_nodes);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : s.edges()) {
        a(e.first, e.second) = 1.0;
        a(e.second, e.first) = 1.0;
    }
    Eigen::VectorXd inv_sqrt_deg(n);
    for (Eigen::Index p = 0; p < n; ++p) {
        const double deg = a.row(p).sum();
        inv_sqrt_deg(p) = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
    }
    const Eigen::MatrixXd norm = inv_sqrt_deg.asDiagonal() * a * inv_sqrt_deg.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(norm);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigendecomposition failed on snapshot " + std::to_string(s.index()));
    const Eigen::VectorXd& values = solver.eigenvalues();
    const Eigen::MatrixXd& vectors = solver.eigenvectors();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
        const double ml = std::abs(values(l)), mr = std::abs(values(r));
        if (ml != mr) return ml > mr;
        if (values(l) != values(r)) return values(l) > values(r);
        return l < r;
    });

    Eigen::MatrixXd coords(n, static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
        const Eigen::Index src = order[k];
        coords.col(static_cast<Eigen::Index>(k)) =
            std::sqrt(std::abs(values(src))) * vectors.col(src);
    }
    return coords;
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Eigen::RowVectorXd EmbeddingSequence::position(std::size_t t, NodeId p) const {
    if (t >= steps.size()) throw std::out_of_range("timestep " + std::to_string(t) + " out of range");
    if (p >= num_nodes()) throw std::out_of_range("node id " + std::to_string(p) + " out of range");
    return steps[t].row(p);
}

EmbeddingSequence embed_aligned(const TemporalGraph& g, const AlignedEmbedderConfig& config,
                                std::vector<std::string>* warnings) {
    const std::size_t n = g.num_nodes();
    const std::size_t d = config.dim;
    if (d == 0) throw std::invalid_argument("embedding dimension must be positive");
    if (d > n)
        throw std::invalid_argument("embedding dimension " + std::to_string(d) +
                                    " exceeds node count " + std::to_string(n));
    if (g.num_snapshots() == 0) throw std::invalid_argument("graph has no snapshots");

    EmbeddingSequence seq;
    seq.steps.reserve(g.num_snapshots());
    std::vector<bool> prev_active(n, false);

    for (std::size_t i = 0; i < g.num_snapshots(); ++i) {
        const Snapshot& s = g.snapshot(i);
        std::vector<bool> active(n, false);
        for (const auto& e : s.edges()) {
            active[e.first] = true;
            active[e.second] = true;
        }

        Eigen::MatrixXd x;
        if (s.num_edges() == 0) {
            if (warnings)
                warnings->push_back("snapshot " + std::to_string(i) +
                                    " has no edges; positions carried over unchanged");
            x = i == 0 ? Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                               static_cast<Eigen::Index>(d))
                       : seq.steps.back();
            seq.steps.push_back(std::move(x));
            prev_active = active;  // all false
            continue;
        }

        x = spectral_coordinates(s, n, d);
        if (i == 0) {
            fix_column_signs(x);
        } else {
            std::vector<Eigen::Index> shared;
            for (std::size_t p = 0; p < n; ++p)
                if (active[p] && prev_active[p]) shared.push_back(static_cast<Eigen::Index>(p));
            if (!shared.empty()) {
                Eigen::MatrixXd cur(static_cast<Eigen::Index>(shared.size()),
                                    static_cast<Eigen::Index>(d));
                Eigen::MatrixXd ref(static_cast<Eigen::Index>(shared.size()),
                                    static_cast<Eigen::Index>(d));
                for (std::size_t r = 0; r < shared.size(); ++r) {
                    cur.row(static_cast<Eigen::Index>(r)) = x.row(shared[r]);
                    ref.row(static_cast<Eigen::Index>(r)) = seq.steps.back().row(shared[r]);
                }
                // Orthogonal Procrustes: rotate/reflect current coordinates onto
                // the previous frame, minimizing ||cur*Q - ref||_F.
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(cur.transpose() * ref,
                                                      Eigen::ComputeFullU | Eigen::ComputeFullV);
                const Eigen::MatrixXd q = svd.matrixU() * svd.matrixV().transpose();
                x *= q;
            } else if (warnings) {
                warnings->push_back("snapshot " + std::to_string(i) +
                                    " shares no active nodes with its predecessor; frame alignment skipped");
            }
        }

        for (std::size_t p = 0; p < n; ++p) {
            if (!active[p]) {
                if (i == 0)
                    x.row(static_cast<Eigen::Index>(p)).setZero();
                else
                    x.row(static_cast<Eigen::Index>(p)) = seq.steps.back().row(static_cast<Eigen::Index>(p));
            }
        }
        if (!x.allFinite())
            throw NumericError("non-finite embedding coordinates at snapshot " + std::to_string(i));
        seq.steps.push_back(std::move(x));
        prev_active = active;
    }
    return seq;
}

Eigen::MatrixXd final_positions(const EmbeddingSequence& seq) {
    if (seq.steps.empty()) throw std::invalid_argument("empty embedding sequence");
    return seq.steps.back();
}

void save_embeddings(std::ostream& out, const EmbeddingSequence& seq, const NodeRegistry& registry) {
    if (seq.num_nodes() != registry.size())
        throw std::invalid_argument("embedding rows (" + std::to_string(seq.num_nodes()) +
                                    ") do not match registry size (" +
                                    std::to_string(registry.size()) + ")");
    out << "KINEMB v1 T=" << seq.num_timesteps() << " N=" << seq.num_nodes()
        << " D=" << seq.dim() << "\n";
    for (std::size_t t = 0; t < seq.num_timesteps(); ++t) {
        for (std::size_t p = 0; p < seq.num_nodes(); ++p) {
            out << t << ' ' << detail::escape_label(registry.label_of(static_cast<NodeId>(p)));
            const auto& row = seq.steps[t];
            for (Eigen::Index k = 0; k < row.cols(); ++k)
                out << ' ' << format_value(row(static_cast<Eigen::Index>(p), k));
            out << '\n';
        }
    }
}

LoadedEmbeddings load_embeddings(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(source_name, 1, "empty file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto parse_size = [&](const std::string& field, const char* key, std::size_t header_line) {
        const std::string prefix = std::string(key) + "=";
        if (field.rfind(prefix, 0) != 0)
            throw ParseError(source_name, header_line, "bad header field '" + field + "'");
        std::size_t value = 0;
        const char* b = field.data() + prefix.size();
        const char* e = field.data() + field.size();
        auto [ptr, ec] = std::from_chars(b, e, value);
        if (ec != std::errc() || ptr != e)
            throw ParseError(source_name, header_line, "bad header field '" + field + "'");
        return value;
    };

    std::size_t num_t = 0, num_n = 0, num_d = 0;
    {
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && line[pos] == ' ') ++pos;
            std::size_t start = pos;
            while (pos < line.size() && line[pos] != ' ') ++pos;
            if (pos > start) fields.push_back(line.substr(start, pos - start));
        }
        if (fields.size() != 5 || fields[0] != "KINEMB" || fields[1] != "v1")
            throw ParseError(source_name, 1, "expected header 'KINEMB v1 T=<T> N=<N> D=<D>'");
        num_t = parse_size(fields[2], "T", 1);
        num_n = parse_size(fields[3], "N", 1);
        num_d = parse_size(fields[4], "D", 1);
    }
    if (num_t == 0 || num_n == 0 || num_d == 0)
        throw ParseError(source_name, 1, "T, N and D must all be positive");

    LoadedEmbeddings out;
    out.seq.steps.assign(num_t, Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(num_n),
                                                          static_cast<Eigen::Index>(num_d),
                                                          std::numeric_limits<double>::quiet_NaN()));
    std::vector<std::vector<bool>> seen(num_t, std::vector<bool>(num_n, false));

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            std::size_t start = pos;
            while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos > start) fields.push_back(line.substr(start, pos - start));
        }
        if (fields.empty()) continue;
        if (fields.size() != 2 + num_d)
            throw ParseError(source_name, lineno,
                             "expected " + std::to_string(2 + num_d) + " fields, got " +
                                 std::to_string(fields.size()));
        std::size_t t = 0;
        {
            auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), t);
            if (ec != std::errc() || ptr != fields[0].data() + fields[0].size() || t >= num_t)
                throw ParseError(source_name, lineno, "bad timestep '" + fields[0] + "'");
        }
        std::string label;
        try {
            label = detail::unescape_label(fields[1]);
        } catch (const std::invalid_argument& ex) {
            throw ParseError(source_name, lineno, ex.what());
        }
        NodeId p;
        if (out.registry.contains(label)) {
            p = out.registry.id_of(label);
        } else {
            if (out.registry.size() >= num_n)
                throw ParseError(source_name, lineno,
                                 "more than " + std::to_string(num_n) + " distinct labels");
            p = out.registry.add(label);
        }
        if (seen[t][p])
            throw ParseError(source_name, lineno,
                             "duplicate row for timestep " + std::to_string(t) + ", label '" +
                                 label + "'");
        seen[t][p] = true;
        for (std::size_t k = 0; k < num_d; ++k) {
            const auto& f = fields[2 + k];
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
            if (ec != std::errc() || ptr != f.data() + f.size())
                throw ParseError(source_name, lineno, "bad coordinate '" + f + "'");
            if (!std::isfinite(value))
                throw ParseError(source_name, lineno, "non-finite coordinate '" + f + "'");
            out.seq.steps[t](static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(k)) = value;
        }
    }
    if (out.registry.size() != num_n)
        throw ParseError(source_name, lineno,
                         "header promised " + std::to_string(num_n) + " nodes, found " +
                             std::to_string(out.registry.size()));
    for (std::size_t t = 0; t < num_t; ++t)
        for (std::size_t p = 0; p < num_n; ++p)
            if (!seen[t][p])
                throw ParseError(source_name, lineno,
                                 "missing row for timestep " + std::to_string(t) + ", label '" +
                                     out.registry.label_of(static_cast<NodeId>(p)) + "'");
    return out;
}

EmbeddingSequence align_embeddings_to_registry(const LoadedEmbeddings& loaded,
                                               const NodeRegistry& target) {
    const std::size_t n = target.size();
    EmbeddingSequence out;
    out.steps.reserve(loaded.seq.num_timesteps());
    std::vector<Eigen::Index> source_row(n);
    for (std::size_t p = 0; p < n; ++p) {
        const std::string& label = target.label_of(static_cast<NodeId>(p));
        if (!loaded.registry.contains(label))
            throw std::invalid_argument("embeddings file lacks node '" + label + "'");
        source_row[p] = static_cast<Eigen::Index>(loaded.registry.id_of(label));
    }
    for (const auto& step : loaded.seq.steps) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(n), step.cols());
        for (std::size_t p = 0; p < n; ++p)
            m.row(static_cast<Eigen::Index>(p)) = step.row(source_row[p]);
        out.steps.push_back(std::move(m));
    }
    return out;
}

}  // namespace kinemb
