#include "bz/interpolants.hpp"

#include <algorithm>
#include <cmath>

#include "bz/energies.hpp"

namespace bz {

namespace {

// Midpoint between nodes i-1 and i, L(2i-1)/(2n).
double midpoint(const GridSpec& g, std::size_t i) {
    return g.length() * static_cast<double>(2 * i - 1) / static_cast<double>(2 * g.n());
}

double cell_slope(const DiscreteSignal& u, std::size_t i) {
    return (u[i] - u[i - 1]) / u.grid().lambda();
}

class PieceBuilder {
public:
    void add(double start, Polynomial poly, KnotKind kind_before) {
        if (!pieces_.empty()) knots_.push_back({start, kind_before});
        pieces_.push_back(std::move(poly));
    }
    PiecewiseH2 finish(double length) && {
        return PiecewiseH2(length, std::move(knots_), std::move(pieces_));
    }

private:
    std::vector<Knot> knots_;
    std::vector<Polynomial> pieces_;
};

}  // namespace

PiecewiseH2 affine_interpolant(const DiscreteSignal& u) {
    const GridSpec& g = u.grid();
    std::vector<Polynomial> pieces;
    std::vector<Knot> knots;
    for (std::size_t i = 1; i <= g.n(); ++i) {
        pieces.push_back(Polynomial{u[i - 1], cell_slope(u, i)});
        if (i > 1) {
            const double at = g.node(i - 1);
            knots.push_back({at, infer_knot_kind(pieces[i - 2], g.node(i - 2), pieces[i - 1], at)});
        }
    }
    return PiecewiseH2(g.length(), std::move(knots), std::move(pieces));
}

std::vector<std::size_t> exceptional_set(const DiscreteSignal& u) {
    return labels_of(u).exceptional();
}

PiecewiseH2 splice(const DiscreteSignal& u) {
    const GridSpec& g = u.grid();
    const std::size_t n = g.n();
    std::vector<bool> spliced(n + 1, false);
    for (std::size_t i = 1; i < n; ++i) spliced[i] = true;
    for (std::size_t i : exceptional_set(u)) spliced[i] = false;

    PieceBuilder out;
    KnotKind pending = KnotKind::Join;
    for (std::size_t i = 1; i <= n; ++i) {
        // Affine part of w on cell [x_{i-1}, x_i], trimmed where a splice overlaps it.
        const double slope = cell_slope(u, i);
        const double a = spliced[i - 1] ? midpoint(g, i) : g.node(i - 1);
        const double b = spliced[i] ? midpoint(g, i) : g.node(i);
        if (b > a) {
            const double start_value = spliced[i - 1] ? 0.5 * (u[i - 1] + u[i]) : u[i - 1];
            out.add(a, Polynomial{start_value, slope}, pending);
            pending = KnotKind::Join;
        }
        if (i == n) break;
        if (spliced[i]) {
            const double curvature = second_difference(u, i);
            out.add(midpoint(g, i), Polynomial{0.5 * (u[i - 1] + u[i]), slope, 0.5 * curvature},
                    pending);
            pending = KnotKind::Join;
        } else {
            pending = KnotKind::Crease;
        }
    }
    return std::move(out).finish(g.length());
}

IdentityCheck verify_identity(const DiscreteSignal& u, const Params& p) {
    IdentityCheck c;
    c.lhs = discrete_energy(u, p).total;
    c.rhs = comparison_energy(splice(u), u.grid(), p);
    c.gap = c.lhs - c.rhs;
    c.holds = std::abs(c.gap) <= 1e-9 * std::max(1.0, c.lhs);
    return c;
}

}  // namespace bz
