#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "bz/lattice.hpp"

namespace bz {

/// Polynomial c0 + c1 s + c2 s^2 + ... in a local variable s.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs) : Polynomial(std::vector<double>(coeffs)) {}

    const std::vector<double>& coeffs() const { return coeffs_; }
    /// Index of the highest nonzero coefficient (0 for the zero polynomial).
    std::size_t degree() const;

    double operator()(double s) const;
    Polynomial derivative() const;

    /// q(s) = p(s + h): re-centres the local variable.
    Polynomial shifted(double h) const;
    /// q(s) = p(k s).
    Polynomial rescaled(double k) const;

    /// Exact integral of p(s)^2 over [0, h] from the coefficients.
    double integral_of_square(double h) const;
    /// Upper bound on sup |p| over [0, h]; exact for degree <= 1.
    double sup_bound(double h) const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<double> coeffs_;
};

/// Kind of a knot between two pieces. Jump and Crease knots are the
/// breakpoints S(u) and S(u'); Join knots are C^1 seams inside an
/// H^2 region (used for spliced interpolants) and carry no energy.
enum class KnotKind : unsigned char { Jump, Crease, Join };

const char* knot_kind_name(KnotKind k);
KnotKind knot_kind_from_name(const std::string& name);

struct Knot {
    double at;
    KnotKind kind;
    friend bool operator==(const Knot&, const Knot&) = default;
};

/// Relative tolerance used only when validating knot kinds.
inline constexpr double kKnotTolerance = 1e-12;

/// Jump if the values at t differ, Crease if values agree and slopes
/// differ, Join if both agree (within kKnotTolerance relative).
/// left is expressed in s = x - left_start, right in s = x - t.
KnotKind infer_knot_kind(const Polynomial& left, double left_start, const Polynomial& right,
                         double t);

/// As infer_knot_kind, but a C^1 match is a spurious breakpoint (PreconditionError).
KnotKind classify_breakpoint(const Polynomial& left, double left_start, const Polynomial& right,
                             double t);

/// Piecewise polynomial on [0, L] with labelled knots. Piece k lives on
/// [knot_{k-1}, knot_k] and is stored in the local variable x - start_k.
class PiecewiseH2 {
public:
    PiecewiseH2(double length, std::vector<Knot> knots, std::vector<Polynomial> pieces,
                std::size_t max_degree = 3);

    /// Kinds inferred with classify_breakpoint; every knot must be a breakpoint.
    static PiecewiseH2 from_breakpoints(double length, std::vector<double> at,
                                        std::vector<Polynomial> pieces,
                                        std::size_t max_degree = 3);

    double length() const { return length_; }
    std::size_t max_degree() const { return max_degree_; }
    const std::vector<Knot>& knots() const { return knots_; }
    const std::vector<Polynomial>& pieces() const { return pieces_; }
    double piece_start(std::size_t k) const { return k == 0 ? 0.0 : knots_[k - 1].at; }
    double piece_end(std::size_t k) const { return k == knots_.size() ? length_ : knots_[k].at; }

    /// Right-continuous evaluation; value(L) uses the last piece.
    double value(double x) const;
    double left_limit(double x) const;
    double right_limit(double x) const;
    double slope_left(double x) const;
    double slope_right(double x) const;

    std::vector<double> jump_points() const;
    std::vector<double> crease_points() const;
    /// Jump/Crease knots only, in order.
    std::vector<Knot> breakpoints() const;

    /// right value - left value at knot index k.
    double jump_height(std::size_t knot_index) const;
    /// right slope - left slope at knot index k.
    double slope_jump(std::size_t knot_index) const;

    /// Integral of |v''|^2 over [0, L], exact per piece.
    double curvature_integral() const;
    /// Upper bounds on sup |v''| and sup |v'| over all pieces.
    double curvature_bound() const;
    double lipschitz_bound() const;

    friend bool operator==(const PiecewiseH2&, const PiecewiseH2&) = default;

private:
    std::size_t piece_index_right(double x) const;
    std::size_t piece_index_left(double x) const;

    double length_;
    std::vector<Knot> knots_;
    std::vector<Polynomial> pieces_;
    std::size_t max_degree_;
};

/// Moves every breakpoint to its nearest node by an affine change of
/// variable on each breakpoint-to-breakpoint segment. Requires breakpoints
/// pairwise >= 2 lambda apart and >= lambda from 0 and L.
PiecewiseH2 snap_breakpoints(const PiecewiseH2& v, const GridSpec& g);

/// True if every breakpoint lies within 1e-9 lambda of a node.
bool breakpoints_on_grid(const PiecewiseH2& v, const GridSpec& g);

/// u_i = v(x_i-) for i >= 1, u_0 = v(0+). Breakpoints must be on grid.
DiscreteSignal sample_recovery(const PiecewiseH2& v, const GridSpec& g);

enum class CaseTag : unsigned char { AJump, BCrease, CSmooth };

/// Tag per interior node i = 1..n-1 (entry i-1), using the psi_branch thresholds.
std::vector<CaseTag> classify_cases(const DiscreteSignal& u);

/// Analytic sufficient conditions, at this grid, for sample_recovery(v) to
/// carry exactly two JumpHalf labels per jump, one Crease label per crease
/// and Smooth labels elsewhere. Breakpoints must be on grid.
bool recovery_conditions_hold(const PiecewiseH2& v, const GridSpec& g);

/// Smallest n0 such that, for every n >= n0 at which the breakpoints of v
/// fall on nodes of make_grid(L, n, p), recovery_conditions_hold is true.
std::size_t classification_threshold(const PiecewiseH2& v, const Params& p);

/// ||v - u||_{L^1(0,L)} and ||v - u||_{L^2(0,L)} with u read as piecewise constant.
/// L^2 is exact; L^1 uses composite Gauss-Legendre quadrature.
double l1_distance(const PiecewiseH2& v, const DiscreteSignal& u);
double l2_distance(const PiecewiseH2& v, const DiscreteSignal& u);

}  // namespace bz
