#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bz/energies.hpp"
#include "bz/lattice.hpp"

namespace bz {

enum class SolveStatus { Converged, IterationCap, Enumerated };

const char* status_name(SolveStatus s);

struct SolveReport {
    DiscreteSignal minimizer;
    EnergyBreakdown breakdown;   // objective(minimizer, data), true psi
    LabelField labels;           // labels_of(minimizer)
    std::size_t iterations = 0;  // quadratic solves (descent) or labelings (enumeration)
    std::vector<double> trace;   // best-seen objective after each step, non-increasing
    SolveStatus status = SolveStatus::Converged;
    // Some |second difference| of the minimizer lies within 1e-9 (relative) of t1 or t2,
    // where psi is discontinuous and the minimum may only be an infimum.
    bool near_threshold = false;
    // solve_exact only: min over labelings of the frozen-label optimum. Since
    // psi(z) is never below its cheapest branch, this bounds m_n from below
    // (up to the node-n regularization).
    double surrogate_bound = 0.0;
};

/// Weight of the (u_n - g_n)^2 term keeping frozen systems positive definite.
inline constexpr double kEndpointRegularization = 1e-12;

/// Minimizer of sum_{Smooth i} lambda d_i^2 + sum_{i<n} lambda (u_i - g_i)^2
/// + 1e-12 (u_n - g_n)^2, by banded Givens QR. Throws VerificationError if
/// the normal-equation residual check fails.
DiscreteSignal solve_quadratic(const LabelField& labels, const DiscreteSignal& data,
                               const Params& p);

/// Exhaustive search over all 3^(n-1) labelings; the true objective of each
/// frozen-label minimizer is compared. Ties go to the lexicographically
/// smallest labeling (Smooth < Crease < JumpHalf, node 1 most significant).
SolveReport solve_exact(const DiscreteSignal& data, const Params& p,
                        std::size_t enumeration_cap = 12);

/// Alternates labels <- psi_branch(second differences), u <- solve_quadratic(labels)
/// until the labels repeat. init itself is the first candidate.
SolveReport solve_alternating(const DiscreteSignal& data, const Params& p,
                              const DiscreteSignal& init, std::size_t max_iter = 200);

/// Alternating descent over a ladder of inflated thresholds t * r^(stages-k),
/// k = 1..stages, with r chosen so stage 1 labels every data node Smooth,
/// followed by a direct descent from the data at the true thresholds.
SolveReport solve_continuation(const DiscreteSignal& data, const Params& p,
                               std::size_t stages = 5, std::size_t max_iter = 200);

/// Exact minimum of the true objective over {lo, lo+step, ..., hi}^(n+1),
/// by dynamic programming over consecutive node pairs. Test oracle.
SolveReport brute_force_oracle(const DiscreteSignal& data, const Params& p, double lo, double hi,
                               double step);

}  // namespace bz
