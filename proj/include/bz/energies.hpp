#pragma once

#include <cstddef>

#include "bz/lattice.hpp"
#include "bz/pwh2.hpp"

namespace bz {

/// Split of an energy value into its curvature, penalty and data parts.
///
/// For discrete energies the counts are per interior node. For the
/// continuum energy a jump is counted as two halves so that
/// penalty_part = crease_count * alpha + jump_half_count * beta / 2 in both cases.
struct EnergyBreakdown {
    double quadratic_part = 0.0;
    std::size_t crease_count = 0;
    std::size_t jump_half_count = 0;
    double penalty_part = 0.0;
    double fidelity = 0.0;
    double total = 0.0;

    friend bool operator==(const EnergyBreakdown&, const EnergyBreakdown&) = default;
};

/// E_n(u) = sum_{i=1}^{n-1} lambda psi(second_difference(u, i)); fidelity is zero.
EnergyBreakdown discrete_energy(const DiscreteSignal& u, const Params& p);

/// E_n(u) + sum_{i=0}^{n-1} lambda (u_i - data_i)^2. Node n has no cell in
/// [0, L) and enters only through second differences.
EnergyBreakdown objective(const DiscreteSignal& u, const DiscreteSignal& data, const Params& p);

/// sum_{i=0}^{n-1} lambda (u_i - data_i)^2.
double fidelity(const DiscreteSignal& u, const DiscreteSignal& data);

/// int |v''|^2 + alpha #creases + beta #jumps, curvature integrated exactly.
EnergyBreakdown continuum_energy(const PiecewiseH2& v, const Params& p);

/// int |v''|^2 + sum over creases of phi_n(slope jump) + beta #jumps.
double comparison_energy(const PiecewiseH2& v, const GridSpec& g, const Params& p);

/// Throws PreconditionError unless both signals live on the same grid.
void require_same_grid(const DiscreteSignal& a, const DiscreteSignal& b, const char* who);

}  // namespace bz
