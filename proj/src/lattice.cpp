#include "bz/lattice.hpp"

#include <cmath>
#include <string>

#include "bz/errors.hpp"

namespace bz {

Params::Params(double alpha, double beta, double c1, double c2)
    : alpha_(alpha), beta_(beta), c1_(c1), c2_(c2) {
    if (!(alpha > 0.0) || !(alpha <= beta) || !(beta <= 2.0 * alpha)) {
        throw PreconditionError("Params: need 0 < alpha <= beta <= 2*alpha, got alpha=" +
                                std::to_string(alpha) + " beta=" + std::to_string(beta));
    }
    if (!(c1 > 0.0) || !(c2 > 0.0) || !std::isfinite(c1) || !std::isfinite(c2)) {
        throw PreconditionError("Params: threshold coefficients c1, c2 must be positive");
    }
}

double GridSpec::node(std::size_t i) const {
    return length_ * static_cast<double>(i) / static_cast<double>(n_);
}

GridSpec make_grid(double length, std::size_t n, const Params& p) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw PreconditionError("make_grid: length must be positive and finite");
    }
    if (n < 2) {
        throw PreconditionError("make_grid: need n >= 2 so that an interior node exists");
    }
    const double lambda = length / static_cast<double>(n);
    const double root = std::sqrt(lambda);
    const double t1 = p.c1() / root;
    const double t2 = p.c2() / (lambda * root);
    if (!(t1 < t2)) {
        throw PreconditionError("make_grid: thresholds not separated at n=" + std::to_string(n) +
                                " (t1=" + std::to_string(t1) + ", t2=" + std::to_string(t2) + ")");
    }
    return GridSpec(length, n, t1, t2);
}

GridSpec GridSpec::with_thresholds(double length, std::size_t n, double t1, double t2) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw PreconditionError("with_thresholds: length must be positive and finite");
    }
    if (n < 2) {
        throw PreconditionError("with_thresholds: need n >= 2");
    }
    const double inv_lambda = static_cast<double>(n) / length;
    if (!(t1 > 0.0) || !(t1 < inv_lambda) || !(inv_lambda < t2) || !std::isfinite(t2)) {
        throw PreconditionError("with_thresholds: need 0 < t1 < 1/lambda < t2");
    }
    return GridSpec(length, n, t1, t2);
}

GridSpec GridSpec::relaxed(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw PreconditionError("relaxed: factor must be positive and finite");
    }
    return GridSpec(length_, n_, t1_ * factor, t2_ * factor);
}

DiscreteSignal::DiscreteSignal(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.n() + 1) {
        throw PreconditionError("DiscreteSignal: expected " + std::to_string(grid_.n() + 1) +
                                " values, got " + std::to_string(values_.size()));
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw PreconditionError("DiscreteSignal: non-finite value");
        }
    }
}

DiscreteSignal DiscreteSignal::constant(const GridSpec& grid, double value) {
    return DiscreteSignal(grid, std::vector<double>(grid.n() + 1, value));
}

char label_code(Label l) {
    switch (l) {
        case Label::Smooth: return 'S';
        case Label::Crease: return 'C';
        case Label::JumpHalf: return 'J';
    }
    return '?';
}

Label label_from_code(char c) {
    switch (c) {
        case 'S': return Label::Smooth;
        case 'C': return Label::Crease;
        case 'J': return Label::JumpHalf;
        default: throw PreconditionError(std::string("unknown label code '") + c + "'");
    }
}

Label LabelField::at(std::size_t i) const {
    if (i < 1 || i > labels_.size()) {
        throw std::out_of_range("LabelField::at: interior index " + std::to_string(i));
    }
    return labels_[i - 1];
}

void LabelField::set(std::size_t i, Label l) {
    if (i < 1 || i > labels_.size()) {
        throw std::out_of_range("LabelField::set: interior index " + std::to_string(i));
    }
    labels_[i - 1] = l;
}

std::vector<std::size_t> LabelField::exceptional() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        if (labels_[k] != Label::Smooth) out.push_back(k + 1);
    }
    return out;
}

Label psi_branch(double z, const GridSpec& g) {
    if (!std::isfinite(z)) {
        throw PreconditionError("psi: non-finite argument");
    }
    const double a = std::abs(z);
    if (a <= g.t1()) return Label::Smooth;
    if (a <= g.t2()) return Label::Crease;
    return Label::JumpHalf;
}

double branch_value(Label l, double z, const GridSpec& g, const Params& p) {
    switch (l) {
        case Label::Smooth: return z * z;
        case Label::Crease: return p.alpha() / g.lambda();
        case Label::JumpHalf: return p.beta() / (2.0 * g.lambda());
    }
    return 0.0;
}

double psi(double z, const GridSpec& g, const Params& p) {
    return branch_value(psi_branch(z, g), z, g, p);
}

double cell_energy(Label l, double z, const GridSpec& g, const Params& p) {
    switch (l) {
        case Label::Smooth: return g.lambda() * z * z;
        case Label::Crease: return p.alpha();
        case Label::JumpHalf: return 0.5 * p.beta();
    }
    return 0.0;
}

double cell_energy(double z, const GridSpec& g, const Params& p) {
    return cell_energy(psi_branch(z, g), z, g, p);
}

double second_difference(const DiscreteSignal& u, std::size_t i) {
    const std::size_t n = u.grid().n();
    if (i < 1 || i >= n) {
        throw std::out_of_range("second_difference: index " + std::to_string(i) +
                                " outside interior range 1.." + std::to_string(n - 1));
    }
    const double lambda = u.grid().lambda();
    // Difference of neighbouring differences: the rounding error scales with
    // the slopes instead of the values.
    return ((u[i + 1] - u[i]) - (u[i] - u[i - 1])) / (lambda * lambda);
}

std::vector<double> second_differences(const DiscreteSignal& u) {
    const std::size_t n = u.grid().n();
    std::vector<double> d(n - 1);
    for (std::size_t i = 1; i < n; ++i) d[i - 1] = second_difference(u, i);
    return d;
}

double phi_n(double slope_jump, const GridSpec& g, const Params& p) {
    if (!std::isfinite(slope_jump)) {
        throw PreconditionError("phi_n: non-finite argument");
    }
    return std::abs(slope_jump) < g.lambda() * g.t2() ? p.alpha() : 0.5 * p.beta();
}

LabelField labels_of(const DiscreteSignal& u) {
    const std::size_t n = u.grid().n();
    LabelField labels(n - 1, Label::Smooth);
    for (std::size_t i = 1; i < n; ++i) labels.set(i, psi_branch(second_difference(u, i), u.grid()));
    return labels;
}

}  // namespace bz
