#pragma once

#include <cstddef>
#include <vector>

#include "bz/lattice.hpp"
#include "bz/pwh2.hpp"

namespace bz {

/// Piecewise-affine interpolant w of the node values. Interior nodes where
/// consecutive slopes differ become creases; the rest become join knots.
PiecewiseH2 affine_interpolant(const DiscreteSignal& u);

/// Interior indices with |u_{i+1} + u_{i-1} - 2u_i| > c1 lambda sqrt(lambda),
/// taken as |second_difference| > t1 so it equals the non-Smooth labels.
std::vector<std::size_t> exceptional_set(const DiscreteSignal& u);

/// C^1 modification v of the affine interpolant: on (x_i - lambda/2, x_i + lambda/2)
/// for every unexceptional interior node, w is replaced by the quadratic
/// matching w's values and slopes at both midpoints, whose constant second
/// derivative is the node's second difference. v has no jumps and its
/// creases are exactly the exceptional nodes.
PiecewiseH2 splice(const DiscreteSignal& u);

struct IdentityCheck {
    double lhs = 0.0;  // discrete_energy(u).total
    double rhs = 0.0;  // comparison_energy(splice(u))
    double gap = 0.0;  // lhs - rhs
    bool holds = false;  // |gap| <= 1e-9 max(1, lhs)
};

IdentityCheck verify_identity(const DiscreteSignal& u, const Params& p);

}  // namespace bz
