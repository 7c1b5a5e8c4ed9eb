#include "bz/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "banded_lsq.hpp"
#include "bz/errors.hpp"

namespace bz {

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "CONVERGED";
        case SolveStatus::IterationCap: return "ITERATION_CAP";
        case SolveStatus::Enumerated: return "ENUMERATED";
    }
    return "?";
}

namespace {

struct Row {
    std::size_t first;
    std::array<double, 3> coeffs;
    double rhs;
};

std::vector<Row> frozen_rows(const LabelField& labels, const DiscreteSignal& data) {
    const GridSpec& g = data.grid();
    const std::size_t n = g.n();
    const double lambda = g.lambda();
    const double wf = std::sqrt(lambda);
    const double wc = 1.0 / (lambda * std::sqrt(lambda));
    const double we = std::sqrt(kEndpointRegularization);
    std::vector<Row> rows;
    rows.reserve(2 * n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        rows.push_back({i, {wf, 0.0, 0.0}, wf * data[i]});
        if (i + 1 < n && labels.at(i + 1) == Label::Smooth) {
            rows.push_back({i, {wc, -2.0 * wc, wc}, 0.0});
        }
    }
    rows.push_back({n, {we, 0.0, 0.0}, we * data[n]});
    return rows;
}

// Normal-equation residual A^T(Ax - c) against the scale |A|^T|A||x| + |A^T c|.
void check_residual(const std::vector<Row>& rows, const std::vector<double>& x) {
    const std::size_t cols = x.size();
    std::vector<double> grad(cols, 0.0), scale(cols, 0.0), rhs(cols, 0.0);
    for (const Row& r : rows) {
        double ax = -r.rhs;
        double abs_ax = 0.0;
        for (std::size_t k = 0; k < 3 && r.first + k < cols; ++k) {
            ax += r.coeffs[k] * x[r.first + k];
            abs_ax += std::abs(r.coeffs[k] * x[r.first + k]);
        }
        for (std::size_t k = 0; k < 3 && r.first + k < cols; ++k) {
            grad[r.first + k] += r.coeffs[k] * ax;
            scale[r.first + k] += std::abs(r.coeffs[k]) * abs_ax;
            rhs[r.first + k] += r.coeffs[k] * r.rhs;
        }
    }
    double worst = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        worst = std::max(worst, std::abs(grad[j]));
        norm = std::max(norm, scale[j] + std::abs(rhs[j]));
    }
    if (worst > 1e-9 * norm) {
        throw VerificationError("solve_quadratic: residual " + std::to_string(worst) +
                                " exceeds tolerance " + std::to_string(1e-9 * norm));
    }
}

bool near_threshold(const DiscreteSignal& u) {
    const GridSpec& g = u.grid();
    for (double d : second_differences(u)) {
        const double a = std::abs(d);
        if (std::abs(a - g.t1()) <= 1e-9 * std::max(1.0, g.t1())) return true;
        if (std::abs(a - g.t2()) <= 1e-9 * std::max(1.0, g.t2())) return true;
    }
    return false;
}

// Value of the frozen-label objective at u, including the endpoint term.
double frozen_value(const LabelField& labels, const DiscreteSignal& u, const DiscreteSignal& data,
                    const Params& p) {
    const GridSpec& g = u.grid();
    double acc = fidelity(u, data);
    const double end = u[g.n()] - data[g.n()];
    acc += kEndpointRegularization * end * end;
    for (std::size_t i = 1; i < g.n(); ++i) {
        acc += cell_energy(labels.at(i), second_difference(u, i), g, p);
    }
    return acc;
}

// Keeps the best candidate under the true objective and the best-seen trace.
class Tracker {
public:
    Tracker(const DiscreteSignal& data, const Params& p) : data_(data), p_(p) {}

    void offer(const DiscreteSignal& u) {
        const double value = objective(u, data_, p_).total;
        if (!best_ || value < best_value_) {
            best_ = u;
            best_value_ = value;
        }
        trace_.push_back(best_value_);
    }

    SolveReport report(std::size_t iterations, SolveStatus status) && {
        const DiscreteSignal& u = *best_;
        SolveReport r{.minimizer = u,
                      .breakdown = objective(u, data_, p_),
                      .labels = labels_of(u),
                      .iterations = iterations,
                      .trace = std::move(trace_),
                      .status = status,
                      .near_threshold = near_threshold(u)};
        return r;
    }

private:
    const DiscreteSignal& data_;
    const Params& p_;
    std::optional<DiscreteSignal> best_;
    double best_value_ = std::numeric_limits<double>::infinity();
    std::vector<double> trace_;
};

struct DescentResult {
    DiscreteSignal last;
    std::size_t iterations;
    bool converged;
};

// Alternating descent whose labels are read against label_grid's thresholds.
DescentResult descend(const DiscreteSignal& data, const Params& p, const GridSpec& label_grid,
                      const DiscreteSignal& init, std::size_t max_iter, Tracker& tracker) {
    tracker.offer(init);
    DiscreteSignal u = init;
    std::optional<LabelField> previous;
    std::size_t iterations = 0;
    while (true) {
        LabelField labels(data.grid().n() - 1, Label::Smooth);
        for (std::size_t i = 1; i < data.grid().n(); ++i) {
            labels.set(i, psi_branch(second_difference(u, i), label_grid));
        }
        if (previous && labels == *previous) return {u, iterations, true};
        if (iterations == max_iter) return {u, iterations, false};
        u = solve_quadratic(labels, data, p);
        ++iterations;
        tracker.offer(u);
        previous = std::move(labels);
    }
}

void require_grid_match(const DiscreteSignal& a, const DiscreteSignal& b, const char* who) {
    require_same_grid(a, b, who);
}

}  // namespace

DiscreteSignal solve_quadratic(const LabelField& labels, const DiscreteSignal& data,
                               const Params& p) {
    (void)p;  // penalties are constants of the frozen problem
    const std::size_t n = data.grid().n();
    if (labels.interior_count() != n - 1) {
        throw PreconditionError("solve_quadratic: label field has " +
                                std::to_string(labels.interior_count()) + " entries, grid needs " +
                                std::to_string(n - 1));
    }
    const std::vector<Row> rows = frozen_rows(labels, data);
    detail::BandedLeastSquares lsq(n + 1);
    for (const Row& r : rows) lsq.add_row(r.first, r.coeffs, r.rhs);
    std::vector<double> x = lsq.solve();
    check_residual(rows, x);
    return DiscreteSignal(data.grid(), std::move(x));
}

SolveReport solve_exact(const DiscreteSignal& data, const Params& p, std::size_t enumeration_cap) {
    const std::size_t interior = data.grid().n() - 1;
    if (interior > enumeration_cap) {
        throw PreconditionError("solve_exact: " + std::to_string(interior) +
                                " interior nodes exceed the enumeration cap " +
                                std::to_string(enumeration_cap));
    }
    Tracker tracker(data, p);
    double surrogate = std::numeric_limits<double>::infinity();
    std::vector<Label> digits(interior, Label::Smooth);
    std::size_t count = 0;
    while (true) {
        const LabelField labels(digits);
        const DiscreteSignal u = solve_quadratic(labels, data, p);
        surrogate = std::min(surrogate, frozen_value(labels, u, data, p));
        tracker.offer(u);
        ++count;
        // Base-3 increment, node n-1 least significant.
        std::size_t k = interior;
        while (k > 0 && digits[k - 1] == Label::JumpHalf) digits[--k] = Label::Smooth;
        if (k == 0) break;
        digits[k - 1] = static_cast<Label>(static_cast<unsigned char>(digits[k - 1]) + 1);
    }
    SolveReport r = std::move(tracker).report(count, SolveStatus::Enumerated);
    r.surrogate_bound = surrogate;
    return r;
}

SolveReport solve_alternating(const DiscreteSignal& data, const Params& p,
                              const DiscreteSignal& init, std::size_t max_iter) {
    require_grid_match(data, init, "solve_alternating");
    Tracker tracker(data, p);
    const DescentResult d = descend(data, p, data.grid(), init, max_iter, tracker);
    return std::move(tracker).report(d.iterations,
                                     d.converged ? SolveStatus::Converged : SolveStatus::IterationCap);
}

SolveReport solve_continuation(const DiscreteSignal& data, const Params& p, std::size_t stages,
                               std::size_t max_iter) {
    if (stages < 1) throw PreconditionError("solve_continuation: need at least one stage");
    const GridSpec& g = data.grid();
    double dmax = 0.0;
    for (double d : second_differences(data)) dmax = std::max(dmax, std::abs(d));
    double ratio = 1.0;
    if (stages > 1 && dmax > g.t1()) {
        ratio = std::pow(dmax / g.t1() * (1.0 + 1e-6), 1.0 / static_cast<double>(stages - 1));
    }

    Tracker tracker(data, p);
    DiscreteSignal u = data;
    std::size_t iterations = 0;
    bool converged = true;
    for (std::size_t k = 1; k <= stages; ++k) {
        const double factor = std::pow(ratio, static_cast<double>(stages - k));
        const GridSpec label_grid = factor == 1.0 ? g : g.relaxed(factor);
        DescentResult d = descend(data, p, label_grid, u, max_iter, tracker);
        iterations += d.iterations;
        converged = converged && d.converged;
        u = std::move(d.last);
    }
    // The data itself is always feasible; descending from it keeps the
    // result no worse than plain alternating descent.
    const DescentResult direct = descend(data, p, g, data, max_iter, tracker);
    iterations += direct.iterations;
    converged = converged && direct.converged;
    return std::move(tracker).report(iterations,
                                     converged ? SolveStatus::Converged : SolveStatus::IterationCap);
}

SolveReport brute_force_oracle(const DiscreteSignal& data, const Params& p, double lo, double hi,
                               double step) {
    const GridSpec& g = data.grid();
    const std::size_t n = g.n();
    if (n > 6) throw PreconditionError("brute_force_oracle: n must be <= 6");
    if (!(step > 0.0) || !(hi >= lo)) {
        throw PreconditionError("brute_force_oracle: need step > 0 and hi >= lo");
    }
    const double span = (hi - lo) / step;
    const auto levels = static_cast<std::size_t>(std::llround(span));
    if (levels > 64 || std::abs(span - static_cast<double>(levels)) > 1e-9 * std::max(1.0, span)) {
        throw PreconditionError("brute_force_oracle: (hi - lo)/step must be an integer <= 64");
    }
    const std::size_t K = levels + 1;
    std::vector<double> value(K);
    for (std::size_t k = 0; k < K; ++k) value[k] = lo + static_cast<double>(k) * step;

    const double lambda = g.lambda();
    const auto fid = [&](std::size_t node, double v) {
        if (node >= n) return 0.0;
        const double r = v - data[node];
        return lambda * r * r;
    };

    // cost[a*K + b]: best energy of nodes 0..i with (u_{i-1}, u_i) = (value[a], value[b]).
    std::vector<double> cost(K * K);
    for (std::size_t a = 0; a < K; ++a)
        for (std::size_t b = 0; b < K; ++b) cost[a * K + b] = fid(0, value[a]) + fid(1, value[b]);

    std::vector<std::vector<std::size_t>> parent(n + 1);
    for (std::size_t i = 1; i < n; ++i) {
        std::vector<double> next(K * K, std::numeric_limits<double>::infinity());
        std::vector<std::size_t>& from = parent[i + 1];
        from.assign(K * K, 0);
        for (std::size_t b = 0; b < K; ++b) {
            for (std::size_t c = 0; c < K; ++c) {
                double best = std::numeric_limits<double>::infinity();
                std::size_t arg = 0;
                for (std::size_t a = 0; a < K; ++a) {
                    const double z = ((value[c] - value[b]) - (value[b] - value[a])) / (lambda * lambda);
                    const double e = cost[a * K + b] + cell_energy(z, g, p);
                    if (e < best) {
                        best = e;
                        arg = a;
                    }
                }
                next[b * K + c] = best + fid(i + 1, value[c]);
                from[b * K + c] = arg;
            }
        }
        cost = std::move(next);
    }

    std::size_t best_state = 0;
    for (std::size_t s = 1; s < K * K; ++s)
        if (cost[s] < cost[best_state]) best_state = s;

    std::vector<double> u(n + 1);
    std::size_t prev = best_state / K;
    std::size_t curr = best_state % K;
    u[n] = value[curr];
    u[n - 1] = value[prev];
    for (std::size_t i = n; i >= 2; --i) {
        const std::size_t a = parent[i][prev * K + curr];
        u[i - 2] = value[a];
        curr = prev;
        prev = a;
    }

    Tracker tracker(data, p);
    DiscreteSignal minimizer(g, std::move(u));
    tracker.offer(minimizer);
    double candidates = std::pow(static_cast<double>(K), static_cast<double>(n + 1));
    return std::move(tracker).report(static_cast<std::size_t>(candidates), SolveStatus::Enumerated);
}

}  // namespace bz
