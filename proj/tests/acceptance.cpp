// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bz/energies.hpp"
#include "bz/errors.hpp"
#include "bz/harness.hpp"
#include "bz/interpolants.hpp"
#include "bz/io.hpp"
#include "bz/solvers.hpp"
#include "cli_runner.hpp"
#include "generators.hpp"

using namespace bz;

namespace {

const Params kSetupA = Params::defaults();

// Collects failures for one criterion.
class Outcome {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        failed_ = failed_ || !ok;
    }
    void note(const std::string& s) { notes_.push_back(s); }

    bool failed() const { return failed_; }
    std::size_t checks() const { return checks_; }
    const std::vector<std::string>& failures() const { return failures_; }
    const std::vector<std::string>& notes() const { return notes_; }

private:
    bool failed_ = false;
    std::size_t checks_ = 0;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string fmt(double x) { return format_double(x); }

DiscreteSignal sample(const std::string& fixture, std::size_t n, const Params& p) {
    return make_fixture(fixture).sample(make_grid(1.0, n, p));
}

// 1. Potential branch table.
void branch_table(Outcome& o) {
    const GridSpec g = make_grid(1.0, 10, kSetupA);
    const double expected[][2] = {{2.0, 4.0}, {10.0, 10.0}, {100.0, 7.5}};
    for (const auto& [z, v] : expected) {
        const double got = psi(z, g, kSetupA);
        o.expect(got == v, "psi(" + fmt(z) + ") = " + fmt(got) + ", expected " + fmt(v));
    }
}

// 2. Double-scale limits, with the admissible n computed from the constants.
void double_scale(Outcome& o) {
    const std::vector<Params> params = {kSetupA, Params(1.0, 2.0, 0.5, 2.0), Params(0.7, 1.0, 1.5, 0.8)};
    std::size_t naive_mismatch = 0;
    for (const Params& p : params) {
        for (std::size_t n = 2; n <= 20000; ++n) {
            std::optional<GridSpec> grid;
            try {
                grid = make_grid(1.0, n, p);
            } catch (const PreconditionError&) {
                continue;
            }
            const GridSpec& g = *grid;
            const double lambda = g.lambda();
            const double root = std::sqrt(lambda);
            if (p.c1() * root < 1.0 && 1.0 <= p.c2() / root) {
                const double z = 1.0 / lambda;
                o.expect(g.t1() < z && z <= g.t2(), "z/lambda outside the crease band at n=" + std::to_string(n));
                o.expect(cell_energy(z, g, p) == p.alpha(),
                         "lambda psi(1/lambda) != alpha at n=" + std::to_string(n));
                if (lambda * psi(z, g, p) != p.alpha()) ++naive_mismatch;
            }
            if (1.0 > p.c2() * root) {
                const double z = 1.0 / (lambda * lambda);
                o.expect(z > g.t2(), "z/lambda^2 below t2 at n=" + std::to_string(n));
                o.expect(2.0 * cell_energy(z, g, p) == p.beta(),
                         "2 lambda psi(1/lambda^2) != beta at n=" + std::to_string(n));
            }
        }
    }
    o.note("naive product lambda*psi differs from alpha in the last bit at " + std::to_string(naive_mismatch) +
           " grids; cell_energy returns the plateau value exactly");
}

// 3. Energy identity on randomized signals.
void identity(Outcome& o) {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (std::size_t n : {4u, 10u, 50u, 200u}) {
        const GridSpec g = make_grid(1.0, n, kSetupA);
        for (int trial = 0; trial < 1000; ++trial) {
            DiscreteSignal u = trial % 4 == 0   ? testgen::noise_signal(rng, g, -1.0, 1.0)
                               : trial % 4 == 1 ? testgen::mixed_signal(rng, g, 0.34, 0.33)
                                                : testgen::mixed_signal(rng, g);
            const IdentityCheck c = verify_identity(u, kSetupA);
            const double bound = 1e-9 * std::max(1.0, c.lhs);
            worst = std::max(worst, std::abs(c.gap) / bound);
            o.expect(std::abs(c.gap) <= bound, "gap " + fmt(c.gap) + " at n=" + std::to_string(n));
        }
    }
    o.note("worst gap / tolerance = " + fmt(worst));
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

// 4. Splice regularity.
void splice_regularity(Outcome& o) {
    std::mt19937_64 rng(77);
    for (std::size_t n : {4u, 10u, 50u, 200u}) {
        const GridSpec g = make_grid(1.0, n, kSetupA);
        for (int trial = 0; trial < 100; ++trial) {
            const DiscreteSignal u = testgen::mixed_signal(rng, g);
            const PiecewiseH2 v = splice(u);
            for (const Knot& k : v.knots()) {
                if (k.kind != KnotKind::Join) continue;
                o.expect(close(v.left_limit(k.at), v.right_limit(k.at)), "value gap at x=" + fmt(k.at));
                o.expect(close(v.slope_left(k.at), v.slope_right(k.at)), "slope gap at x=" + fmt(k.at));
            }
            for (std::size_t k = 0; k < v.pieces().size(); ++k) {
                if (v.pieces()[k].coeffs().size() < 3) continue;
                const double mid = 0.5 * (v.piece_start(k) + v.piece_end(k));
                const auto node = static_cast<std::size_t>(std::llround(mid / g.lambda()));
                o.expect(2.0 * v.pieces()[k].coeffs()[2] == second_difference(u, node),
                         "v'' != second difference at node " + std::to_string(node));
            }
        }
    }
}

// 5. Recovery limsup.
void recovery(Outcome& o) {
    const PiecewiseH2 quad = *make_fixture("quadratic").shape;
    for (std::size_t n : {10u, 100u, 1000u}) {
        const GridSpec g = make_grid(1.0, n, kSetupA);
        const double e = discrete_energy(sample_recovery(quad, g), kSetupA).total;
        const double expected = 4.0 * static_cast<double>(n - 1) / static_cast<double>(n);
        o.expect(e == expected, "quadratic E_n = " + fmt(e) + " vs " + fmt(expected) + " at n=" + std::to_string(n));
    }
    std::string dyadic;
    for (std::size_t n : {16u, 128u, 1024u}) {
        const double e = discrete_energy(sample_recovery(quad, make_grid(1.0, n, kSetupA)), kSetupA).total;
        dyadic += " n=" + std::to_string(n) + (e == 4.0 * static_cast<double>(n - 1) / static_cast<double>(n) ? ":exact" : ":inexact");
    }
    o.note("quadratic E_n on dyadic grids:" + dyadic);
    const PiecewiseH2 jc = *make_fixture("jump_crease").shape;
    const double F = continuum_energy(jc, kSetupA).total;
    const std::size_t threshold = classification_threshold(jc, kSetupA);
    o.note("jump_crease threshold n0 = " + std::to_string(threshold) + ", F = " + fmt(F));
    std::size_t past = 0;
    for (std::size_t n = 4; n <= 10000; n += 4) {
        if (n < threshold) continue;
        const std::vector<RecoveryRow> rows = run_recovery_check(jc, {n}, kSetupA);
        if (!rows[0].snapped) continue;
        ++past;
        o.expect(rows[0].penalty_part == kSetupA.alpha() + kSetupA.beta(),
                 "penalty " + fmt(rows[0].penalty_part) + " at n=" + std::to_string(n));
    }
    o.expect(past > 0, "no grid past the threshold");
    for (std::size_t n : {100u, 1000u, 10000u}) {
        const RecoveryRow r = run_recovery_check(jc, {n}, kSetupA)[0];
        o.expect(r.snapped && std::abs(r.energy - F) <= 5.0 * F / static_cast<double>(n),
                 "|E_n - F| = " + fmt(std::abs(r.energy - F)) + " at n=" + std::to_string(n));
    }
}

// 6. Oracle equivalence at n = 5.
void oracle(Outcome& o) {
    std::mt19937_64 rng(606);
    const GridSpec g = make_grid(1.0, 5, kSetupA);
    double widest = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(6);
        for (std::size_t i = 0; i <= 5; ++i) {
            switch (trial % 3) {
                case 0: v[i] = testgen::uniform(rng, 0.0, 5.0); break;
                case 1: v[i] = (i >= 3 ? 4.0 : 0.0) + testgen::uniform(rng, -0.3, 0.3); break;
                default: v[i] = testgen::uniform(rng, 0.5, 1.5) * static_cast<double>(i * i) * 0.2; break;
            }
        }
        const DiscreteSignal d(g, v);
        const double lo_data = *std::min_element(v.begin(), v.end());
        const double hi_data = *std::max_element(v.begin(), v.end());
        const double step = (hi_data - lo_data + 1.0) / 64.0;
        const double lo = lo_data - 0.5;
        const double exact = solve_exact(d, kSetupA).breakdown.total;
        const double quantized = brute_force_oracle(d, kSetupA, lo, lo + 64.0 * step, step).breakdown.total;
        // Fidelity moves by at most lambda (2 |u - g| delta + delta^2) per node when a
        // node shifts by delta <= step; |u - g| is bounded by the search range.
        const double lip = hi_data - lo_data + 1.0;
        const double q = 5.0 * g.lambda() * (2.0 * lip * step + step * step);
        o.expect(exact <= quantized, "exact " + fmt(exact) + " > oracle " + fmt(quantized));
        o.expect(quantized >= exact - q, "oracle below exact minus slack");
        widest = std::max(widest, quantized - exact);
    }
    o.note("largest oracle - exact gap = " + fmt(widest));

    // Jump between nodes 2 and 3; snapping L/2 at n = 5 would put it one cell later.
    const DiscreteSignal step(g, {0.0, 0.0, 0.0, 5.0, 5.0, 5.0});
    const double exact = solve_exact(step, kSetupA).breakdown.total;
    const double quantized = brute_force_oracle(step, kSetupA, -0.5, 5.5, 0.25).breakdown.total;
    o.expect(exact == kSetupA.beta(), "step fixture at n=5: solve_exact total " + fmt(exact) + " != beta");
    o.expect(quantized == kSetupA.beta(), "step fixture at n=5: oracle total " + fmt(quantized) + " != beta");
}

// 7. Convergence of minima.
void convergence(Outcome& o) {
    const std::vector<std::size_t> ns = {10, 20, 40, 80, 160};
    const SweepResult step = run_sweep(make_fixture("step"), ns, RunConfig{});
    for (const SweepRow& r : step.rows) {
        o.expect(r.verified && close(r.m_n, kSetupA.beta()),
                 "step m_n = " + fmt(r.m_n) + " at n=" + std::to_string(r.n));
        o.expect(r.jump_half_count == 2 && r.crease_count == 0, "step labels at n=" + std::to_string(r.n));
    }

    const SweepResult crease = run_sweep(make_fixture("crease"), ns, RunConfig{});
    for (const SweepRow& r : crease.rows) {
        o.expect(r.verified && close(r.m_n, kSetupA.alpha()),
                 "crease m_n = " + fmt(r.m_n) + " at n=" + std::to_string(r.n));
        o.expect(r.crease_count == 1 && r.jump_half_count == 0, "crease labels at n=" + std::to_string(r.n));
    }

    RunConfig steep;
    steep.params = Params(1.0, 1.5, 1.0, 10.0);
    std::string values;
    for (const SweepRow& r : run_sweep(make_fixture("steep_crease"), ns, steep).rows) values += " " + fmt(r.m_n);
    o.note("slope-20 crease with c2 = 10, m_n:" + values);

    const Fixture smooth = make_fixture("smooth");
    const SweepResult s = run_sweep(smooth, {160, 320, 640}, RunConfig{});
    const double fine = *s.reference_m;
    for (const SweepRow& r : s.rows) {
        o.expect(std::abs(r.m_n - fine) <= 0.02 * fine,
                 "smooth |m_n - m_fine| = " + fmt(std::abs(r.m_n - fine)) + " at n=" + std::to_string(r.n));
    }
    o.note("m_fine = " + fmt(fine));
}

bool non_increasing(const std::vector<double>& t) {
    for (std::size_t k = 1; k < t.size(); ++k)
        if (t[k] > t[k - 1] + 1e-12 * std::max(1.0, std::abs(t[k - 1]))) return false;
    return true;
}

// 8. Descent and determinism.
void descent(Outcome& o) {
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 10 + rng() % 150;
        const GridSpec g = make_grid(1.0, n, kSetupA);
        const DiscreteSignal d = trial % 2 ? testgen::mixed_signal(rng, g)
                                           : add_noise(sample("step", n, kSetupA), 0.2, rng());
        const SolveReport a = solve_alternating(d, kSetupA, d);
        const SolveReport c = solve_continuation(d, kSetupA);
        o.expect(non_increasing(a.trace), "alternating trace increases");
        o.expect(non_increasing(c.trace), "continuation trace increases");
        for (SolverKind k : {SolverKind::Alternating, SolverKind::Continuation}) {
            RunConfig cfg;
            cfg.solver = k;
            const DenoiseResult first = run_denoise(d, cfg);
            const DenoiseResult second = run_denoise(d, cfg);
            o.expect(format_denoise_report(first.report) == format_denoise_report(second.report) &&
                         format_reconstruction_csv(first.reconstruction) ==
                             format_reconstruction_csv(second.reconstruction),
                     "repeated run differs");
        }
    }
}

// 9. Single-threshold reduction.
void single_threshold(Outcome& o) {
    const double gamma = 0.5;
    const Params p(gamma, 2.0 * gamma, std::sqrt(gamma), 1.0);
    std::mt19937_64 rng(909);
    for (std::size_t n : {10u, 40u, 160u, 1000u}) {
        const GridSpec g = make_grid(1.0, n, p);
        const double lambda = g.lambda();
        // Near t1 the two sides are c1^2/lambda reached through different roundings,
        // so agreement is to a few ulps.
        std::vector<double> zs = {0.0, g.t1(), std::nextafter(g.t1(), 0.0), std::nextafter(g.t2(), INFINITY),
                                  2.0 * g.t2(), 1e9};
        for (int k = 0; k < 200; ++k) {
            zs.push_back(testgen::uniform(rng, 0.0, g.t1()));
            zs.push_back(testgen::uniform(rng, g.t2(), 10.0 * g.t2()));
        }
        for (double z : zs) {
            if (z > g.t1() && z <= g.t2()) continue;
            for (double s : {z, -z}) {
                const double two_branch = std::min(s * s, gamma / lambda);
                const double a = psi(s, g, p);
                o.expect(std::abs(a - two_branch) <= 4.0 * std::numeric_limits<double>::epsilon() * two_branch,
                         "psi(" + fmt(s) + ") = " + fmt(a) + " vs " + fmt(two_branch) + " at n=" + std::to_string(n));
            }
        }
    }
    RunConfig cfg;
    cfg.params = p;
    const SweepResult s = run_sweep(make_fixture("step"), {10, 20, 40, 80, 160}, cfg);
    for (const SweepRow& r : s.rows)
        o.expect(r.verified && close(r.m_n, 2.0 * gamma), "step m_n = " + fmt(r.m_n) + " at n=" + std::to_string(r.n));
}

// 10. CLI round trips and exit codes.
void cli(Outcome& o) {
    using clitest::slurp;
    using clitest::spit;
    const clitest::Sandbox box("acceptance");
    auto run = [&](const std::string& args, int code) {
        const clitest::Result r = box.run(args);
        o.expect(r.code == code, "'" + args + "' exited " + std::to_string(r.code) + ", expected " +
                                     std::to_string(code));
        return r;
    };

    run("noise --fixture step --n 64 --sigma 0.1 --seed 7 --output noisy", 0);
    const std::string signal_text = slurp(box.path("noisy.csv"));
    const DiscreteSignal signal = parse_signal_csv(signal_text, RunConfig{});
    o.expect(format_signal_csv(signal, {"noise sigma=0.10000000000000001 seed=7"}) == signal_text,
             "signal csv not bit-stable");
    spit(box.path("again.csv"), format_signal_csv(signal));
    o.expect(parse_signal_csv(slurp(box.path("again.csv")), RunConfig{}) == signal, "signal csv round trip");

    spit(box.path("cfg.json"), R"({"solver": "alternating", "max_iter": 50})");
    run("denoise --input noisy.csv --config cfg.json --output rec", 0);
    const std::string rec_text = slurp(box.path("rec.csv"));
    const Reconstruction rec = parse_reconstruction_csv(rec_text, RunConfig{});
    o.expect(format_reconstruction_csv(rec) == rec_text, "reconstruction csv not bit-stable");
    const std::string report_text = slurp(box.path("rec.json"));
    const DenoiseReport report = parse_denoise_report(report_text);
    o.expect(format_denoise_report(report) == report_text, "report json not bit-stable");
    o.expect(report.verified_total == objective(rec.u, rec.data, kSetupA).total, "report total not reproduced");

    const RunConfig cfg = parse_config(slurp(box.path("cfg.json")));
    o.expect(parse_config(format_config(cfg)) == cfg, "config round trip");

    run("sweep --fixture step --n-list 10,20 --output sweep", 0);
    const std::string sweep_text = slurp(box.path("sweep.json"));
    o.expect(format_sweep(parse_sweep(sweep_text)) == sweep_text, "sweep json not bit-stable");

    spit(box.path("shape.json"), format_piecewise_json(*make_fixture("jump_crease").shape));
    const std::string shape_text = slurp(box.path("shape.json"));
    o.expect(format_piecewise_json(parse_piecewise_json(shape_text)) == shape_text, "piecewise json not bit-stable");
    run("recovery-check --input shape.json --n-list 8,100 --output recovery", 0);
    const std::string recovery_text = slurp(box.path("recovery.csv"));
    o.expect(format_recovery_csv(parse_recovery_csv(recovery_text)) == recovery_text, "recovery csv not bit-stable");
    run("energy --input shape.json", 0);

    spit(box.path("bad.csv"), "x,g\n0,0\n0.5,1\n0.75,0\n");
    run("denoise --input bad.csv", 2);
    run("denoise --input absent.csv", 2);
    run("sweep --fixture nonexistent --n-list 10", 2);
    run("denoise", 2);
    spit(box.path("exact.json"), R"({"solver": "exact"})");
    run("denoise --fixture step --n 40 --config exact.json", 3);
    run("noise --fixture step --n 10 --sigma -0.5 --seed 1", 3);
    o.note("exit code 4 needs a failed internal verification; no input reaches it");
}

struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds
    std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "potential branch table", 1.0, branch_table},
        {2, "double-scale limits", 1.0, double_scale},
        {3, "energy identity", 10.0, identity},
        {4, "splice regularity", 1.0, splice_regularity},
        {5, "recovery limsup", 5.0, recovery},
        {6, "oracle equivalence", 60.0, oracle},
        {7, "convergence of minima", 30.0, convergence},
        {8, "descent and determinism", 5.0, descent},
        {9, "single-threshold reduction", 5.0, single_threshold},
        {10, "CLI round trips and exit codes", 5.0, cli},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.expect(false, std::string("threw: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.expect(seconds < c.budget, "took longer than " + fmt(c.budget) + " s");
        std::printf("%s %2d %s (%zu checks, %.2f s)\n", o.failed() ? "FAIL" : "PASS", c.id, c.name, o.checks(),
                    seconds);
        for (const std::string& f : o.failures()) std::printf("       failed: %s\n", f.c_str());
        for (const std::string& n : o.notes()) std::printf("       note: %s\n", n.c_str());
        failed += o.failed() ? 1 : 0;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
