#include "bz/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bz/errors.hpp"
#include "json_util.hpp"

namespace bz {

using detail::json;

const char* solver_name(SolverKind k) {
    switch (k) {
        case SolverKind::Exact: return "exact";
        case SolverKind::Alternating: return "alternating";
        case SolverKind::Continuation: return "continuation";
    }
    return "?";
}

SolverKind solver_from_name(const std::string& name) {
    if (name == "exact") return SolverKind::Exact;
    if (name == "alternating") return SolverKind::Alternating;
    if (name == "continuation") return SolverKind::Continuation;
    throw InputError("unknown solver '" + name + "'");
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

struct CsvLine {
    std::size_t number;
    std::string text;
};

// Non-blank, non-comment lines with their 1-based line numbers.
std::vector<CsvLine> content_lines(const std::string& text) {
    std::vector<CsvLine> out;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        out.push_back({number, line});
    }
    return out;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        std::string f = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto a = f.find_first_not_of(" \t");
        const auto b = f.find_last_not_of(" \t");
        fields.push_back(a == std::string::npos ? std::string() : f.substr(a, b - a + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

double parse_number(const std::string& field, const std::string& source, std::size_t line) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    if (!field.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || field.empty()) {
        throw InputError(source, line, "cannot parse number '" + field + "'");
    }
    if (!std::isfinite(value)) throw InputError(source, line, "non-finite value '" + field + "'");
    return value;
}

struct Table {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;
};

Table read_table(const std::string& text, const std::vector<std::string>& header,
                 const std::string& source) {
    const std::vector<CsvLine> lines = content_lines(text);
    if (lines.empty()) throw InputError(source, 1, "empty file");
    if (split_fields(lines[0].text) != header) {
        std::string expected;
        for (const std::string& h : header) expected += (expected.empty() ? "" : ",") + h;
        throw InputError(source, lines[0].number, "expected header '" + expected + "'");
    }
    Table t;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        std::vector<std::string> fields = split_fields(lines[k].text);
        if (fields.size() != header.size()) {
            throw InputError(source, lines[k].number,
                             "expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
        t.lines.push_back(lines[k].number);
    }
    return t;
}

// Builds the grid implied by the x column and checks every row against it.
GridSpec grid_from_column(const std::vector<double>& x, const std::vector<std::size_t>& lines,
                          const RunConfig& c, const std::string& source) {
    if (x.size() < 3) {
        throw InputError(source, lines.empty() ? 1 : lines.back(),
                         "need at least 3 nodes, got " + std::to_string(x.size()));
    }
    const std::size_t n = x.size() - 1;
    const double length = c.length.value_or(x.back());
    GridSpec g = [&] {
        try {
            return make_grid(length, n, c.params);
        } catch (const PreconditionError& e) {
            throw InputError(source, lines.back(), e.what());
        }
    }();
    const double tol = 1e-9 * g.lambda();
    for (std::size_t i = 0; i <= n; ++i) {
        if (!(std::abs(x[i] - g.node(i)) <= tol)) {
            throw InputError(source, lines[i],
                             "x = " + format_double(x[i]) + " is not node " + std::to_string(i) +
                                 " of the uniform grid on [0, " + format_double(length) + "] with n = " +
                                 std::to_string(n));
        }
    }
    return g;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
    const json j = detail::parse_json(text, source);
    if (!j.is_object()) throw InputError(source, 1, "config must be a JSON object");
    static const std::vector<std::string> known = {"L", "alpha", "beta", "c1", "c2", "solver",
                                                   "stages", "max_iter", "enumeration_cap"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw InputError(source + ": unknown config key '" + it.key() + "'");
        }
    }
    RunConfig c;
    const auto number = [&](const char* key, double fallback) {
        return j.contains(key) ? detail::field<double>(j, key, source) : fallback;
    };
    const auto count = [&](const char* key, std::size_t fallback) {
        if (!j.contains(key)) return fallback;
        if (!j.at(key).is_number_unsigned()) {
            throw InputError(source + ": '" + key + "' must be a non-negative integer");
        }
        return j.at(key).get<std::size_t>();
    };
    if (j.contains("L")) {
        c.length = detail::field<double>(j, "L", source);
        if (!(*c.length > 0.0) || !std::isfinite(*c.length)) throw InputError(source + ": L must be positive");
    }
    try {
        const Params d = Params::defaults();
        c.params = Params(number("alpha", d.alpha()), number("beta", d.beta()), number("c1", d.c1()),
                          number("c2", d.c2()));
    } catch (const PreconditionError& e) {
        throw InputError(source + ": " + e.what());
    }
    if (j.contains("solver")) c.solver = solver_from_name(detail::field<std::string>(j, "solver", source));
    c.stages = count("stages", c.stages);
    c.max_iter = count("max_iter", c.max_iter);
    c.enumeration_cap = count("enumeration_cap", c.enumeration_cap);
    if (c.stages < 1) throw InputError(source + ": stages must be >= 1");
    return c;
}

std::string format_config(const RunConfig& c) {
    json j = json::object();
    if (c.length) j["L"] = *c.length;
    j["alpha"] = c.params.alpha();
    j["beta"] = c.params.beta();
    j["c1"] = c.params.c1();
    j["c2"] = c.params.c2();
    j["solver"] = solver_name(c.solver);
    j["stages"] = c.stages;
    j["max_iter"] = c.max_iter;
    j["enumeration_cap"] = c.enumeration_cap;
    return detail::dump_json(j);
}

DiscreteSignal parse_signal_csv(const std::string& text, const RunConfig& c, const std::string& source) {
    const Table t = read_table(text, {"x", "g"}, source);
    std::vector<double> x, g;
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        x.push_back(parse_number(t.rows[k][0], source, t.lines[k]));
        g.push_back(parse_number(t.rows[k][1], source, t.lines[k]));
    }
    return DiscreteSignal(grid_from_column(x, t.lines, c, source), std::move(g));
}

std::string format_signal_csv(const DiscreteSignal& g, const std::vector<std::string>& comments) {
    std::string out;
    for (const std::string& c : comments) out += "# " + c + "\n";
    out += "x,g\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        out += format_double(g.grid().node(i)) + "," + format_double(g[i]) + "\n";
    }
    return out;
}

Reconstruction parse_reconstruction_csv(const std::string& text, const RunConfig& c,
                                        const std::string& source) {
    const Table t = read_table(text, {"x", "u", "g", "label"}, source);
    std::vector<double> x, u, g;
    std::vector<Label> labels;
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        const auto& row = t.rows[k];
        x.push_back(parse_number(row[0], source, t.lines[k]));
        u.push_back(parse_number(row[1], source, t.lines[k]));
        g.push_back(parse_number(row[2], source, t.lines[k]));
        if (row[3].size() != 1) throw InputError(source, t.lines[k], "label must be S, C or J");
        Label l;
        try {
            l = label_from_code(row[3][0]);
        } catch (const PreconditionError& e) {
            throw InputError(source, t.lines[k], e.what());
        }
        const bool boundary = k == 0 || k + 1 == t.rows.size();
        if (boundary && l != Label::Smooth) {
            throw InputError(source, t.lines[k], "boundary nodes must be labelled S");
        }
        if (!boundary) labels.push_back(l);
    }
    const GridSpec grid = grid_from_column(x, t.lines, c, source);
    return {DiscreteSignal(grid, std::move(u)), DiscreteSignal(grid, std::move(g)),
            LabelField(std::move(labels))};
}

std::string format_reconstruction_csv(const Reconstruction& r) {
    require_same_grid(r.u, r.data, "format_reconstruction_csv");
    const std::size_t n = r.u.grid().n();
    std::string out = "x,u,g,label\n";
    for (std::size_t i = 0; i <= n; ++i) {
        const char label = (i == 0 || i == n) ? 'S' : label_code(r.labels.at(i));
        out += format_double(r.u.grid().node(i)) + "," + format_double(r.u[i]) + "," +
               format_double(r.data[i]) + "," + label + "\n";
    }
    return out;
}

PiecewiseH2 parse_piecewise_json(const std::string& text, const std::string& source) {
    const json j = detail::parse_json(text, source);
    if (!j.is_object()) throw InputError(source, 1, "piecewise description must be a JSON object");
    const auto length = detail::field<double>(j, "L", source);
    const std::size_t max_degree = j.contains("max_degree") ? detail::field<std::size_t>(j, "max_degree", source) : 3;
    std::vector<Knot> knots;
    if (j.contains("knots")) {
        for (const json& k : j.at("knots")) {
            const auto kind = detail::field<std::string>(k, "kind", source);
            try {
                knots.push_back({detail::field<double>(k, "at", source), knot_kind_from_name(kind)});
            } catch (const PreconditionError& e) {
                throw InputError(source + ": " + e.what());
            }
        }
    }
    std::vector<Polynomial> pieces;
    for (const json& p : detail::field<json>(j, "pieces", source)) {
        try {
            pieces.emplace_back(p.get<std::vector<double>>());
        } catch (const json::exception& e) {
            throw InputError(source + ": piece coefficients: " + e.what());
        }
    }
    try {
        return PiecewiseH2(length, std::move(knots), std::move(pieces), max_degree);
    } catch (const PreconditionError& e) {
        throw InputError(source + ": " + e.what());
    }
}

std::string format_piecewise_json(const PiecewiseH2& v) {
    json j = json::object();
    j["L"] = v.length();
    j["max_degree"] = v.max_degree();
    j["knots"] = json::array();
    for (const Knot& k : v.knots()) j["knots"].push_back({{"at", k.at}, {"kind", knot_kind_name(k.kind)}});
    j["pieces"] = json::array();
    for (const Polynomial& p : v.pieces()) j["pieces"].push_back(p.coeffs());
    return detail::dump_json(j);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path.string() + ": cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path.string() + ": cannot open for writing");
    out << contents;
    if (!out) throw InputError(path.string() + ": write failed");
}

}  // namespace bz
