#include "bz/energies.hpp"

#include <string>

#include "bz/errors.hpp"

namespace bz {

void require_same_grid(const DiscreteSignal& a, const DiscreteSignal& b, const char* who) {
    if (!(a.grid() == b.grid())) {
        throw PreconditionError(std::string(who) + ": signals live on different grids");
    }
}

EnergyBreakdown discrete_energy(const DiscreteSignal& u, const Params& p) {
    const GridSpec& g = u.grid();
    EnergyBreakdown e;
    for (std::size_t i = 1; i < g.n(); ++i) {
        const double d = second_difference(u, i);
        switch (psi_branch(d, g)) {
            case Label::Smooth: e.quadratic_part += g.lambda() * d * d; break;
            case Label::Crease: ++e.crease_count; break;
            case Label::JumpHalf: ++e.jump_half_count; break;
        }
    }
    e.penalty_part = static_cast<double>(e.crease_count) * p.alpha() +
                     static_cast<double>(e.jump_half_count) * (0.5 * p.beta());
    e.total = e.quadratic_part + e.penalty_part;
    return e;
}

double fidelity(const DiscreteSignal& u, const DiscreteSignal& data) {
    require_same_grid(u, data, "fidelity");
    const double lambda = u.grid().lambda();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.grid().n(); ++i) {
        const double r = u[i] - data[i];
        acc += lambda * r * r;
    }
    return acc;
}

EnergyBreakdown objective(const DiscreteSignal& u, const DiscreteSignal& data, const Params& p) {
    EnergyBreakdown e = discrete_energy(u, p);
    e.fidelity = fidelity(u, data);
    e.total = e.quadratic_part + e.penalty_part + e.fidelity;
    return e;
}

EnergyBreakdown continuum_energy(const PiecewiseH2& v, const Params& p) {
    EnergyBreakdown e;
    e.quadratic_part = v.curvature_integral();
    const std::size_t jumps = v.jump_points().size();
    e.crease_count = v.crease_points().size();
    e.jump_half_count = 2 * jumps;
    e.penalty_part = static_cast<double>(e.crease_count) * p.alpha() +
                     static_cast<double>(jumps) * p.beta();
    e.total = e.quadratic_part + e.penalty_part;
    return e;
}

double comparison_energy(const PiecewiseH2& v, const GridSpec& g, const Params& p) {
    double total = v.curvature_integral();
    for (std::size_t k = 0; k < v.knots().size(); ++k) {
        switch (v.knots()[k].kind) {
            case KnotKind::Crease: total += phi_n(v.slope_jump(k), g, p); break;
            case KnotKind::Jump: total += p.beta(); break;
            case KnotKind::Join: break;
        }
    }
    return total;
}

}  // namespace bz
