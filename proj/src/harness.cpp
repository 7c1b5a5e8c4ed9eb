#include "bz/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "bz/errors.hpp"
#include "bz/interpolants.hpp"
#include "json_util.hpp"

namespace bz {

using detail::json;

const char* reference_name(ReferenceKind k) {
    switch (k) {
        case ReferenceKind::Analytic: return "ANALYTIC";
        case ReferenceKind::FineGrid: return "FINE_GRID";
        case ReferenceKind::None: return "NONE";
    }
    return "?";
}

ReferenceKind reference_from_name(const std::string& name) {
    if (name == "ANALYTIC") return ReferenceKind::Analytic;
    if (name == "FINE_GRID") return ReferenceKind::FineGrid;
    if (name == "NONE") return ReferenceKind::None;
    throw InputError("unknown reference kind '" + name + "'");
}

Features detect_features(const DiscreteSignal& u, const LabelField& labels) {
    const GridSpec& g = u.grid();
    Features f;
    for (std::size_t i = 1; i < g.n(); ++i) {
        switch (labels.at(i)) {
            case Label::Smooth: break;
            case Label::Crease: f.creases.push_back({g.node(i), i}); break;
            case Label::JumpHalf:
                if (i + 1 < g.n() && labels.at(i + 1) == Label::JumpHalf) {
                    f.jumps.push_back({g.node(i + 1), i, false});
                    ++i;
                } else {
                    f.jumps.push_back({g.node(i), i, true});
                }
                break;
        }
    }
    return f;
}

namespace {

void verify_total(const SolveReport& r, const DiscreteSignal& data, const Params& p) {
    const double recomputed = objective(r.minimizer, data, p).total;
    if (!(std::abs(recomputed - r.breakdown.total) <= 1e-10 * std::abs(recomputed))) {
        throw VerificationError("reported objective " + format_double(r.breakdown.total) +
                                " does not match re-evaluation " + format_double(recomputed));
    }
}

json params_json(const Params& p) {
    return {{"alpha", p.alpha()}, {"beta", p.beta()}, {"c1", p.c1()}, {"c2", p.c2()}};
}

Params params_from(const json& j, const std::string& source) {
    try {
        return Params(detail::field<double>(j, "alpha", source), detail::field<double>(j, "beta", source),
                      detail::field<double>(j, "c1", source), detail::field<double>(j, "c2", source));
    } catch (const PreconditionError& e) {
        throw InputError(source + ": " + e.what());
    }
}

json breakdown_json(const EnergyBreakdown& e) {
    return {{"quadratic_part", e.quadratic_part}, {"crease_count", e.crease_count},
            {"jump_half_count", e.jump_half_count}, {"penalty_part", e.penalty_part},
            {"fidelity", e.fidelity}, {"total", e.total}};
}

EnergyBreakdown breakdown_from(const json& j, const std::string& source) {
    EnergyBreakdown e;
    e.quadratic_part = detail::field<double>(j, "quadratic_part", source);
    e.crease_count = detail::field<std::size_t>(j, "crease_count", source);
    e.jump_half_count = detail::field<std::size_t>(j, "jump_half_count", source);
    e.penalty_part = detail::field<double>(j, "penalty_part", source);
    e.fidelity = detail::field<double>(j, "fidelity", source);
    e.total = detail::field<double>(j, "total", source);
    return e;
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key, const std::string& source) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return detail::field<double>(j, key, source);
}

}  // namespace

SolveReport solve_configured(const DiscreteSignal& data, const RunConfig& c) {
    SolveReport r = [&] {
        switch (c.solver) {
            case SolverKind::Exact: return solve_exact(data, c.params, c.enumeration_cap);
            case SolverKind::Alternating: return solve_alternating(data, c.params, data, c.max_iter);
            case SolverKind::Continuation: break;
        }
        return solve_continuation(data, c.params, c.stages, c.max_iter);
    }();
    verify_total(r, data, c.params);
    return r;
}

DenoiseResult run_denoise(const DiscreteSignal& data, const RunConfig& c) {
    SolveReport r = solve_configured(data, c);
    DenoiseReport report;
    report.solver = solver_name(c.solver);
    report.status = status_name(r.status);
    report.length = data.grid().length();
    report.n = data.grid().n();
    report.params = c.params;
    report.breakdown = r.breakdown;
    report.verified_total = objective(r.minimizer, data, c.params).total;
    report.iterations = r.iterations;
    report.trace = {r.trace.size(), r.trace.empty() ? 0.0 : r.trace.front(),
                    r.trace.empty() ? 0.0 : r.trace.back()};
    report.near_threshold = r.near_threshold;
    report.features = detect_features(r.minimizer, r.labels);
    return {Reconstruction{std::move(r.minimizer), data, std::move(r.labels)}, std::move(report)};
}

std::string format_denoise_report(const DenoiseReport& r) {
    json j = json::object();
    j["solver"] = r.solver;
    j["status"] = r.status;
    j["L"] = r.length;
    j["n"] = r.n;
    j["lambda"] = r.length / static_cast<double>(r.n);
    j["params"] = params_json(r.params);
    j["breakdown"] = breakdown_json(r.breakdown);
    j["verified_total"] = r.verified_total;
    j["iterations"] = r.iterations;
    j["trace"] = {{"length", r.trace.length}, {"first", r.trace.first}, {"last", r.trace.last}};
    j["near_threshold"] = r.near_threshold;
    j["jumps"] = json::array();
    for (const DetectedJump& d : r.features.jumps) {
        j["jumps"].push_back({{"at", d.at}, {"node", d.node}, {"anomalous", d.anomalous}});
    }
    j["creases"] = json::array();
    for (const DetectedCrease& d : r.features.creases) j["creases"].push_back({{"at", d.at}, {"node", d.node}});
    return detail::dump_json(j);
}

DenoiseReport parse_denoise_report(const std::string& text, const std::string& source) {
    const json j = detail::parse_json(text, source);
    DenoiseReport r;
    r.solver = detail::field<std::string>(j, "solver", source);
    r.status = detail::field<std::string>(j, "status", source);
    r.length = detail::field<double>(j, "L", source);
    r.n = detail::field<std::size_t>(j, "n", source);
    r.params = params_from(detail::field<json>(j, "params", source), source);
    r.breakdown = breakdown_from(detail::field<json>(j, "breakdown", source), source);
    r.verified_total = detail::field<double>(j, "verified_total", source);
    r.iterations = detail::field<std::size_t>(j, "iterations", source);
    const json trace = detail::field<json>(j, "trace", source);
    r.trace = {detail::field<std::size_t>(trace, "length", source), detail::field<double>(trace, "first", source),
               detail::field<double>(trace, "last", source)};
    r.near_threshold = detail::field<bool>(j, "near_threshold", source);
    for (const json& d : detail::field<json>(j, "jumps", source)) {
        r.features.jumps.push_back({detail::field<double>(d, "at", source),
                                    detail::field<std::size_t>(d, "node", source),
                                    detail::field<bool>(d, "anomalous", source)});
    }
    for (const json& d : detail::field<json>(j, "creases", source)) {
        r.features.creases.push_back(
            {detail::field<double>(d, "at", source), detail::field<std::size_t>(d, "node", source)});
    }
    return r;
}

double fine_grid_reference(const Fixture& f, const Params& p, std::size_t n) {
    const GridSpec g = make_grid(f.length, n, p);
    const DiscreteSignal data = f.sample(g);
    const DiscreteSignal u = solve_quadratic(LabelField(n - 1, Label::Smooth), data, p);
    return objective(u, data, p).total;
}

SweepResult run_sweep(const Fixture& f, std::vector<std::size_t> n_list, const RunConfig& c) {
    if (n_list.empty()) throw PreconditionError("sweep: empty n list");
    std::sort(n_list.begin(), n_list.end());
    n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());

    SweepResult s;
    s.fixture = f.name;
    s.length = f.length;
    s.params = c.params;
    s.reference = f.reference;
    switch (f.reference) {
        case ReferenceKind::Analytic: s.reference_m = f.analytic_minimum(c.params); break;
        case ReferenceKind::FineGrid:
            try {
                s.reference_m = fine_grid_reference(f, c.params);
            } catch (const PreconditionError&) {
                s.reference = ReferenceKind::None;
            }
            break;
        case ReferenceKind::None: break;
    }

    for (std::size_t n : n_list) {
        const auto start = std::chrono::steady_clock::now();
        const GridSpec g = make_grid(f.length, n, c.params);
        const DiscreteSignal data = f.sample(g);
        SolveReport best = solve_configured(data, c);
        std::optional<double> exact_total;
        if (c.solver != SolverKind::Exact && n - 1 <= c.enumeration_cap) {
            SolveReport exact = solve_exact(data, c.params, c.enumeration_cap);
            exact_total = exact.breakdown.total;
            if (exact.breakdown.total < best.breakdown.total) best = std::move(exact);
        } else if (c.solver == SolverKind::Exact) {
            exact_total = best.breakdown.total;
        }
        verify_total(best, data, c.params);

        SweepRow row;
        row.n = n;
        row.lambda = g.lambda();
        row.m_n = best.breakdown.total;
        row.status = status_name(best.status);
        row.crease_count = best.breakdown.crease_count;
        row.jump_half_count = best.breakdown.jump_half_count;
        row.exact_total = exact_total;
        if (s.reference_m) row.reference_gap = std::abs(row.m_n - *s.reference_m);
        row.verified = true;
        row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        s.rows.push_back(row);
    }
    return s;
}

std::string format_sweep(const SweepResult& s) {
    json j = json::object();
    j["fixture"] = s.fixture;
    j["L"] = s.length;
    j["params"] = params_json(s.params);
    j["reference"] = {{"kind", reference_name(s.reference)}, {"value", optional_json(s.reference_m)}};
    j["rows"] = json::array();
    for (const SweepRow& r : s.rows) {
        j["rows"].push_back({{"n", r.n},
                             {"lambda", r.lambda},
                             {"m_n", r.m_n},
                             {"status", r.status},
                             {"crease_count", r.crease_count},
                             {"jump_half_count", r.jump_half_count},
                             {"wall_time", r.wall_time},
                             {"exact_total", optional_json(r.exact_total)},
                             {"reference_gap", optional_json(r.reference_gap)},
                             {"verified", r.verified}});
    }
    return detail::dump_json(j);
}

SweepResult parse_sweep(const std::string& text, const std::string& source) {
    const json j = detail::parse_json(text, source);
    SweepResult s;
    s.fixture = detail::field<std::string>(j, "fixture", source);
    s.length = detail::field<double>(j, "L", source);
    s.params = params_from(detail::field<json>(j, "params", source), source);
    const json ref = detail::field<json>(j, "reference", source);
    s.reference = reference_from_name(detail::field<std::string>(ref, "kind", source));
    s.reference_m = optional_from(ref, "value", source);
    for (const json& r : detail::field<json>(j, "rows", source)) {
        SweepRow row;
        row.n = detail::field<std::size_t>(r, "n", source);
        row.lambda = detail::field<double>(r, "lambda", source);
        row.m_n = detail::field<double>(r, "m_n", source);
        row.status = detail::field<std::string>(r, "status", source);
        row.crease_count = detail::field<std::size_t>(r, "crease_count", source);
        row.jump_half_count = detail::field<std::size_t>(r, "jump_half_count", source);
        row.wall_time = detail::field<double>(r, "wall_time", source);
        row.exact_total = optional_from(r, "exact_total", source);
        row.reference_gap = optional_from(r, "reference_gap", source);
        row.verified = detail::field<bool>(r, "verified", source);
        s.rows.push_back(row);
    }
    return s;
}

std::vector<RecoveryRow> run_recovery_check(const PiecewiseH2& v, const std::vector<std::size_t>& n_list,
                                            const Params& p) {
    const double continuum = continuum_energy(v, p).total;
    std::vector<RecoveryRow> rows;
    for (std::size_t n : n_list) {
        const GridSpec g = make_grid(v.length(), n, p);
        RecoveryRow row;
        row.n = n;
        row.lambda = g.lambda();
        row.continuum = continuum;
        std::optional<PiecewiseH2> snapped;
        try {
            snapped = snap_breakpoints(v, g);
        } catch (const PreconditionError&) {
            rows.push_back(row);
            continue;
        }
        row.snapped = true;
        const EnergyBreakdown e = discrete_energy(sample_recovery(*snapped, g), p);
        row.energy = e.total;
        row.gap = e.total - continuum;
        row.quadratic_part = e.quadratic_part;
        row.penalty_part = e.penalty_part;
        row.conditions_hold = recovery_conditions_hold(*snapped, g);
        rows.push_back(row);
    }
    return rows;
}

std::string format_recovery_csv(const std::vector<RecoveryRow>& rows) {
    std::string out = "n,lambda,snapped,energy,continuum,gap,quadratic_part,penalty_part,conditions\n";
    for (const RecoveryRow& r : rows) {
        out += std::to_string(r.n) + "," + format_double(r.lambda) + "," + (r.snapped ? "1" : "0") + "," +
               format_double(r.energy) + "," + format_double(r.continuum) + "," + format_double(r.gap) + "," +
               format_double(r.quadratic_part) + "," + format_double(r.penalty_part) + "," +
               (r.conditions_hold ? "1" : "0") + "\n";
    }
    return out;
}

std::vector<RecoveryRow> parse_recovery_csv(const std::string& text, const std::string& source) {
    std::vector<RecoveryRow> rows;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool header = true;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            if (line != "n,lambda,snapped,energy,continuum,gap,quadratic_part,penalty_part,conditions") {
                throw InputError(source, line_no, "unexpected recovery table header");
            }
            header = false;
            continue;
        }
        std::vector<std::string> f;
        std::size_t a = 0;
        while (true) {
            const auto comma = line.find(',', a);
            f.push_back(line.substr(a, comma == std::string::npos ? std::string::npos : comma - a));
            if (comma == std::string::npos) break;
            a = comma + 1;
        }
        if (f.size() != 9) throw InputError(source, line_no, "expected 9 fields");
        try {
            std::size_t pos = 0;
            const auto num = [&](const std::string& s) {
                const double x = std::stod(s, &pos);
                if (pos != s.size()) throw std::invalid_argument(s);
                return x;
            };
            const auto flag = [&](const std::string& s) {
                if (s != "0" && s != "1") throw std::invalid_argument(s);
                return s == "1";
            };
            RecoveryRow r;
            r.n = static_cast<std::size_t>(std::stoull(f[0], &pos));
            if (pos != f[0].size()) throw std::invalid_argument(f[0]);
            r.lambda = num(f[1]);
            r.snapped = flag(f[2]);
            r.energy = num(f[3]);
            r.continuum = num(f[4]);
            r.gap = num(f[5]);
            r.quadratic_part = num(f[6]);
            r.penalty_part = num(f[7]);
            r.conditions_hold = flag(f[8]);
            rows.push_back(r);
        } catch (const std::logic_error& e) {
            throw InputError(source, line_no, std::string("bad field: ") + e.what());
        }
    }
    if (header) throw InputError(source, 1, "empty recovery table");
    return rows;
}

DiscreteSignal add_noise(const DiscreteSignal& g, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw PreconditionError("add_noise: sigma must be >= 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> out(g.values().begin(), g.values().end());
    for (double& x : out) x += sigma * normal(rng);
    return DiscreteSignal(g.grid(), std::move(out));
}

}  // namespace bz
