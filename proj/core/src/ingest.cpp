#include "kinemb/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "detail/escape.hpp"
#include "kinemb/errors.hpp"

namespace kinemb {

namespace {

std::vector<std::string> split_whitespace(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

double parse_time_field(const std::string& field, const std::string& source, std::size_t line) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError(source, line, "bad timestamp '" + field + "'");
    if (!std::isfinite(value))
        throw ParseError(source, line, "non-finite timestamp '" + field + "'");
    return value;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<EdgeEvent> parse_triples(std::istream& in, const std::string& source) {
    std::vector<EdgeEvent> events;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto fields = split_whitespace(stripped);
        if (fields.size() != 3)
            throw ParseError(source, lineno,
                             "expected 3 whitespace-separated fields, got " +
                                 std::to_string(fields.size()));
        EdgeEvent ev;
        ev.time = parse_time_field(fields[0], source, lineno);
        ev.u = fields[1];
        ev.v = fields[2];
        if (ev.u == ev.v)
            throw ParseError(source, lineno, "self-interaction for node '" + ev.u + "'");
        events.push_back(std::move(ev));
    }
    if (events.empty()) throw ParseError(source, lineno, "no events found");
    return events;
}

// One RFC 4180 record (quoted fields may span lines). Returns false at EOF.
// `lineno` tracks the physical line the record started on.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& lineno,
                     std::size_t& record_start, const std::string& source) {
    fields.clear();
    int c = in.get();
    if (c == EOF) return false;
    record_start = lineno + 1;
    std::string field;
    bool in_quotes = false;
    auto push_field = [&] {
        fields.push_back(field);
        field.clear();
    };
    while (true) {
        if (c == EOF) {
            if (in_quotes) throw ParseError(source, record_start, "unterminated quoted field");
            ++lineno;
            push_field();
            return true;
        }
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                int next = in.peek();
                if (next == '"') {
                    in.get();
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++lineno;
                field += ch;
            }
        } else if (ch == '"' && field.empty()) {
            in_quotes = true;
        } else if (ch == ',') {
            push_field();
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && in.peek() == '\n') in.get();
            ++lineno;
            push_field();
            return true;
        } else {
            field += ch;
        }
        c = in.get();
    }
}

std::vector<EdgeEvent> parse_coauthorship(std::istream& in, const std::string& source) {
    std::vector<std::string> fields;
    std::size_t lineno = 0;
    std::size_t record_line = 0;
    if (!read_csv_record(in, fields, lineno, record_line, source))
        throw ParseError(source, 1, "empty file");
    if (fields.size() != 3 || trim(fields[0]) != "paper_id" || trim(fields[1]) != "year" ||
        trim(fields[2]) != "authors")
        throw ParseError(source, record_line, "expected header 'paper_id,year,authors'");

    std::vector<EdgeEvent> events;
    while (read_csv_record(in, fields, lineno, record_line, source)) {
        if (fields.size() == 1 && trim(fields[0]).empty()) continue;  // blank line
        if (fields.size() != 3)
            throw ParseError(source, record_line,
                             "expected 3 fields, got " + std::to_string(fields.size()));
        const double year = parse_time_field(trim(fields[1]), source, record_line);
        std::vector<std::string> authors;
        std::stringstream authors_field(fields[2]);
        std::string name;
        while (std::getline(authors_field, name, ';')) {
            name = trim(name);
            if (name.empty())
                throw ParseError(source, record_line, "empty author name");
            if (std::find(authors.begin(), authors.end(), name) == authors.end())
                authors.push_back(name);
        }
        if (authors.empty()) throw ParseError(source, record_line, "no authors");
        for (std::size_t i = 0; i < authors.size(); ++i)
            for (std::size_t j = i + 1; j < authors.size(); ++j)
                events.push_back({year, authors[i], authors[j]});
    }
    if (events.empty()) throw ParseError(source, lineno, "no author pairs found");
    return events;
}

std::string format_time(double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", t);
    return buf;
}

}  // namespace

std::vector<EdgeEvent> parse_edge_events(std::istream& in, EventFormat format,
                                         const std::string& source_name) {
    switch (format) {
        case EventFormat::triple: return parse_triples(in, source_name);
        case EventFormat::coauthorship_csv: return parse_coauthorship(in, source_name);
    }
    throw std::invalid_argument("unknown event format");
}

void serialize_edge_events(std::ostream& out, const std::vector<EdgeEvent>& events) {
    for (const auto& ev : events) {
        for (const auto* label : {&ev.u, &ev.v})
            for (unsigned char c : *label)
                if (std::isspace(c) || c == '\0')
                    throw std::invalid_argument("label '" + *label +
                                                "' not representable in triple format");
        out << format_time(ev.time) << '\t' << ev.u << '\t' << ev.v << '\n';
    }
}

EventFormat event_format_from_name(const std::string& name) {
    if (name == "triple") return EventFormat::triple;
    if (name == "coauthorship-csv") return EventFormat::coauthorship_csv;
    throw std::invalid_argument("unknown event format '" + name +
                                "' (expected 'triple' or 'coauthorship-csv')");
}

TemporalGraph bin_snapshots(const std::vector<EdgeEvent>& events, std::size_t num_bins,
                            double overlap) {
    if (events.empty()) throw std::invalid_argument("no events to bin");
    if (num_bins == 0) throw std::invalid_argument("need at least one bin");
    if (!(overlap >= 0.0 && overlap < 1.0))
        throw std::invalid_argument("overlap must lie in [0, 1)");

    double tmin = events.front().time, tmax = events.front().time;
    for (const auto& ev : events) {
        tmin = std::min(tmin, ev.time);
        tmax = std::max(tmax, ev.time);
    }
    if (tmin == tmax)
        throw std::invalid_argument("all events share one timestamp; cannot form time bins");

    const double width = (tmax - tmin) / static_cast<double>(num_bins);
    TemporalGraphBuilder builder(num_bins);
    for (const auto& ev : events) {  // registry ids follow first appearance in the event stream
        builder.add_node(ev.u);
        builder.add_node(ev.v);
    }
    for (const auto& ev : events) {
        auto k0 = static_cast<std::size_t>(
            std::min(std::max((ev.time - tmin) / width, 0.0),
                     static_cast<double>(num_bins - 1)));
        const std::size_t k_lo = k0 > 0 ? k0 - 1 : 0;
        const std::size_t k_hi = std::min(k0 + 1, num_bins - 1);
        for (std::size_t k = k_lo; k <= k_hi; ++k) {
            const double lo = tmin + static_cast<double>(k) * width;
            const double hi = lo + width * (1.0 + overlap);
            const bool inside =
                ev.time >= lo && (ev.time < hi || (k == num_bins - 1 && ev.time <= tmax));
            if (inside) builder.add_edge(k, ev.u, ev.v);
        }
    }
    return builder.build();
}

SplitSpec SplitSpec::ratio(double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train fraction must lie in (0, 1)");
    SplitSpec s;
    s.mode = Mode::ratio_by_time;
    s.train_fraction = train_fraction;
    return s;
}

SplitSpec SplitSpec::holdout(std::size_t test_timestep) {
    SplitSpec s;
    s.mode = Mode::per_year_holdout;
    s.test_timestep = test_timestep;
    return s;
}

TemporalSplit temporal_split(const TemporalGraph& g, const SplitSpec& spec) {
    const std::size_t total = g.num_snapshots();
    std::size_t train_count = 0;
    if (spec.mode == SplitSpec::Mode::ratio_by_time) {
        train_count = static_cast<std::size_t>(
            std::ceil(spec.train_fraction * static_cast<double>(total)));
    } else {
        train_count = spec.test_timestep;
    }
    if (train_count == 0)
        throw std::invalid_argument("split leaves no training snapshots");
    if (train_count >= total)
        throw std::invalid_argument("split leaves no target snapshot (train_count=" +
                                    std::to_string(train_count) + ", snapshots=" +
                                    std::to_string(total) + ")");

    NodeRegistry registry = g.registry();
    std::vector<Snapshot> train_snaps(g.snapshots().begin(),
                                      g.snapshots().begin() + static_cast<std::ptrdiff_t>(train_count));
    Snapshot target = g.snapshot(train_count);
    return {TemporalGraph(std::move(registry), std::move(train_snaps)), std::move(target)};
}

std::size_t LabeledPairSet::num_positive() const {
    return static_cast<std::size_t>(
        std::count_if(pairs.begin(), pairs.end(), [](const LabeledPair& p) { return p.label > 0; }));
}

std::size_t LabeledPairSet::num_negative() const {
    return pairs.size() - num_positive();
}

LabeledPairSet sample_labeled_pairs(const TemporalGraph& g, const Snapshot& target,
                                    const std::set<NodeId>& cohort, std::uint64_t seed) {
    for (NodeId p : cohort)
        if (p >= g.num_nodes())
            throw std::out_of_range("cohort node " + std::to_string(p) + " out of range");

    std::vector<NodeId> members(cohort.begin(), cohort.end());
    LabeledPairSet out;
    out.timestep = target.index();

    for (const auto& e : target.edges())
        if (cohort.count(e.first) && cohort.count(e.second))
            out.pairs.push_back({e.first, e.second, +1});
    const std::size_t num_pos = out.pairs.size();
    if (num_pos == 0)
        throw std::invalid_argument("target snapshot has no edges inside the cohort");

    std::vector<std::pair<NodeId, NodeId>> candidates;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (!target.has_edge(members[i], members[j]))
                candidates.emplace_back(members[i], members[j]);
    if (candidates.size() < num_pos)
        throw std::invalid_argument("cohort supplies only " + std::to_string(candidates.size()) +
                                    " non-edges for " + std::to_string(num_pos) + " positives");

    // Partial Fisher-Yates: the first num_pos slots become the sample.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < num_pos; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
        std::swap(candidates[i], candidates[pick(rng)]);
        out.pairs.push_back({candidates[i].first, candidates[i].second, -1});
    }
    return out;
}

void save_graph(std::ostream& out, const TemporalGraph& g) {
    out << "KINGRAPH v1 T=" << g.num_snapshots() << " N=" << g.num_nodes() << "\n";
    for (NodeId p = 0; p < g.num_nodes(); ++p)
        out << "n " << p << ' ' << detail::escape_label(g.registry().label_of(p)) << "\n";
    for (const auto& s : g.snapshots())
        for (const auto& e : s.edges())
            out << "e " << s.index() << ' ' << e.first << ' ' << e.second << "\n";
}

TemporalGraph load_graph(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(source_name, 1, "empty file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t num_snapshots = 0, num_nodes = 0;
    {
        auto fields = split_whitespace(line);
        auto parse_kv = [&](const std::string& field, const char* key) -> std::size_t {
            const std::string prefix = std::string(key) + "=";
            if (field.rfind(prefix, 0) != 0)
                throw ParseError(source_name, 1, "bad header field '" + field + "'");
            std::size_t value = 0;
            const char* b = field.data() + prefix.size();
            const char* e = field.data() + field.size();
            auto [ptr, ec] = std::from_chars(b, e, value);
            if (ec != std::errc() || ptr != e)
                throw ParseError(source_name, 1, "bad header field '" + field + "'");
            return value;
        };
        if (fields.size() != 4 || fields[0] != "KINGRAPH" || fields[1] != "v1")
            throw ParseError(source_name, 1, "expected header 'KINGRAPH v1 T=<T> N=<N>'");
        num_snapshots = parse_kv(fields[2], "T");
        num_nodes = parse_kv(fields[3], "N");
    }

    TemporalGraphBuilder builder(num_snapshots);
    std::size_t nodes_seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto fields = split_whitespace(stripped);
        if (fields[0] == "n") {
            if (fields.size() != 3) throw ParseError(source_name, lineno, "bad node line");
            std::size_t id = 0;
            auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), id);
            if (ec != std::errc() || ptr != fields[1].data() + fields[1].size())
                throw ParseError(source_name, lineno, "bad node id '" + fields[1] + "'");
            if (id != nodes_seen)
                throw ParseError(source_name, lineno, "node ids must be contiguous from 0");
            std::string label;
            try {
                label = detail::unescape_label(fields[2]);
            } catch (const std::invalid_argument& ex) {
                throw ParseError(source_name, lineno, ex.what());
            }
            if (builder.add_node(label) != nodes_seen)
                throw ParseError(source_name, lineno, "duplicate node label '" + label + "'");
            ++nodes_seen;
        } else if (fields[0] == "e") {
            if (fields.size() != 4) throw ParseError(source_name, lineno, "bad edge line");
            std::size_t vals[3];
            for (int i = 0; i < 3; ++i) {
                const auto& f = fields[static_cast<std::size_t>(i) + 1];
                auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), vals[i]);
                if (ec != std::errc() || ptr != f.data() + f.size())
                    throw ParseError(source_name, lineno, "bad edge field '" + f + "'");
            }
            if (vals[0] >= num_snapshots)
                throw ParseError(source_name, lineno, "snapshot index out of range");
            if (vals[1] >= nodes_seen || vals[2] >= nodes_seen)
                throw ParseError(source_name, lineno, "edge endpoint out of range");
            try {
                builder.add_edge(vals[0], static_cast<NodeId>(vals[1]), static_cast<NodeId>(vals[2]));
            } catch (const std::invalid_argument& ex) {
                throw ParseError(source_name, lineno, ex.what());
            }
        } else {
            throw ParseError(source_name, lineno, "unknown record type '" + fields[0] + "'");
        }
    }
    if (nodes_seen != num_nodes)
        throw ParseError(source_name, lineno,
                         "header promised " + std::to_string(num_nodes) + " nodes, found " +
                             std::to_string(nodes_seen));
    return builder.build();
}

}  // namespace kinemb
