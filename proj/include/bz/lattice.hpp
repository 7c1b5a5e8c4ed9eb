#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bz {

/// Penalty and threshold coefficients of the discrete potential.
///
/// alpha prices a crease, beta a jump. Construction enforces
/// 0 < alpha <= beta <= 2 alpha, the window in which the continuum
/// energy is lower semicontinuous, and c1, c2 > 0.
class Params {
public:
    Params(double alpha, double beta, double c1, double c2);

    /// alpha = 1, beta = 1.5, c1 = c2 = 1.
    static Params defaults() { return {1.0, 1.5, 1.0, 1.0}; }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }

    friend bool operator==(const Params&, const Params&) = default;

private:
    double alpha_;
    double beta_;
    double c1_;
    double c2_;
};

/// Uniform lattice {i * L / n : i = 0..n} with the two curvature thresholds
/// separating the smooth, crease and jump regimes at this resolution.
class GridSpec {
public:
    double length() const { return length_; }
    std::size_t n() const { return n_; }
    double lambda() const { return length_ / static_cast<double>(n_); }
    double t1() const { return t1_; }
    double t2() const { return t2_; }

    /// Coordinate of node i, computed as L*i/n (one rounding).
    double node(std::size_t i) const;

    /// Thresholds supplied directly instead of c1/sqrt(lambda), c2/(lambda sqrt(lambda)).
    /// Only t1 < 1/lambda < t2 is checked; asymptotic separation is not decidable at one n.
    static GridSpec with_thresholds(double length, std::size_t n, double t1, double t2);

    /// Copy with both thresholds multiplied by factor (> 0). Used by
    /// continuation, which deliberately leaves the validated regime.
    GridSpec relaxed(double factor) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    friend GridSpec make_grid(double length, std::size_t n, const Params& p);
    GridSpec(double length, std::size_t n, double t1, double t2)
        : length_(length), n_(n), t1_(t1), t2_(t2) {}

    double length_;
    std::size_t n_;
    double t1_;
    double t2_;
};

/// Grid with lambda = L/n, t1 = c1/sqrt(lambda), t2 = c2/(lambda sqrt(lambda)).
/// Rejects n < 2 and resolutions where t1 >= t2.
GridSpec make_grid(double length, std::size_t n, const Params& p);

/// Node values u(x_0..x_n); identified with the piecewise-constant function
/// equal to u(x_i) on [x_i, x_{i+1}).
class DiscreteSignal {
public:
    DiscreteSignal(GridSpec grid, std::vector<double> values);

    static DiscreteSignal constant(const GridSpec& grid, double value);

    const GridSpec& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    friend bool operator==(const DiscreteSignal&, const DiscreteSignal&) = default;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

/// Active branch of the potential at an interior node.
enum class Label : unsigned char {
    Smooth,    // z^2
    Crease,    // alpha / lambda
    JumpHalf,  // beta / (2 lambda)
};

char label_code(Label l);  // 'S', 'C', 'J'
Label label_from_code(char c);

/// Labels of the interior nodes 1..n-1.
class LabelField {
public:
    LabelField() = default;
    explicit LabelField(std::vector<Label> labels) : labels_(std::move(labels)) {}
    LabelField(std::size_t interior_count, Label fill) : labels_(interior_count, fill) {}

    /// Label of interior node i, 1 <= i <= n-1.
    Label at(std::size_t i) const;
    void set(std::size_t i, Label l);

    std::size_t interior_count() const { return labels_.size(); }
    std::span<const Label> raw() const { return labels_; }

    /// Interior indices whose label is not Smooth.
    std::vector<std::size_t> exceptional() const;

    friend bool operator==(const LabelField&, const LabelField&) = default;
    friend auto operator<=>(const LabelField&, const LabelField&) = default;

private:
    std::vector<Label> labels_;
};

Label psi_branch(double z, const GridSpec& g);

/// The three-branch potential: z^2 if |z| <= t1, alpha/lambda if
/// t1 < |z| <= t2, beta/(2 lambda) otherwise. Threshold comparisons are
/// exact; there is no tolerance band.
double psi(double z, const GridSpec& g, const Params& p);

/// Value of branch l at z (z^2 for Smooth regardless of |z|).
double branch_value(Label l, double z, const GridSpec& g, const Params& p);

/// lambda * psi(z), computed branch-wise so that the plateaus give exactly
/// alpha and beta/2 (the product lambda * (alpha/lambda) is not always
/// alpha in double precision).
double cell_energy(double z, const GridSpec& g, const Params& p);
double cell_energy(Label l, double z, const GridSpec& g, const Params& p);

/// (u_{i+1} + u_{i-1} - 2 u_i) / lambda^2 for 1 <= i <= n-1.
double second_difference(const DiscreteSignal& u, std::size_t i);

std::vector<double> second_differences(const DiscreteSignal& u);

/// Crease price for a slope jump: alpha if |jump| < lambda*t2, beta/2
/// otherwise. With the default thresholds lambda*t2 = c2/sqrt(lambda).
double phi_n(double slope_jump, const GridSpec& g, const Params& p);

/// psi_branch of every interior second difference.
LabelField labels_of(const DiscreteSignal& u);

}  // namespace bz
