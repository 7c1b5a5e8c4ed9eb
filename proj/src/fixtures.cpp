#include <cmath>
#include <numbers>

#include "bz/errors.hpp"
#include "bz/harness.hpp"

namespace bz {

DiscreteSignal Fixture::sample(const GridSpec& g) const {
    if (shape) return sample_recovery(snap_breakpoints(*shape, g), g);
    std::vector<double> values(g.n() + 1);
    for (std::size_t i = 0; i <= g.n(); ++i) values[i] = profile(g.node(i));
    return DiscreteSignal(g, std::move(values));
}

namespace {

Fixture piecewise(std::string name, PiecewiseH2 shape, ReferenceKind reference) {
    Fixture f;
    f.name = std::move(name);
    f.length = shape.length();
    f.shape = std::move(shape);
    f.reference = reference;
    return f;
}

PiecewiseH2 kinked(double length, double slope) {
    return PiecewiseH2(length, {{0.5 * length, KnotKind::Crease}}, {Polynomial{0.0}, Polynomial{0.0, slope}});
}

// x^2, then a slope increase of 1 at L/4 and an upward jump of 1 at L/2.
PiecewiseH2 jump_crease(double length) {
    const double quarter = 0.25 * length;
    const Polynomial first{0.0, 0.0, 1.0};
    const Polynomial second{first(quarter), first.derivative()(quarter) + 1.0, 1.0};
    const Polynomial third{second(quarter) + 1.0, second.derivative()(quarter), 1.0};
    return PiecewiseH2(length, {{quarter, KnotKind::Crease}, {2.0 * quarter, KnotKind::Jump}},
                       {first, second, third});
}

}  // namespace

std::vector<std::string> fixture_names() {
    return {"constant", "step", "crease", "steep_crease", "smooth", "quadratic", "jump_crease"};
}

Fixture make_fixture(const std::string& name, double length) {
    if (!(length > 0.0) || !std::isfinite(length)) throw PreconditionError("fixture length must be positive");
    if (name == "constant") {
        Fixture f = piecewise(name, PiecewiseH2(length, {}, {Polynomial{1.0}}), ReferenceKind::Analytic);
        f.analytic_minimum = [](const Params&) { return 0.0; };
        return f;
    }
    if (name == "step") {
        Fixture f = piecewise(
            name, PiecewiseH2(length, {{0.5 * length, KnotKind::Jump}}, {Polynomial{0.0}, Polynomial{5.0}}),
            ReferenceKind::Analytic);
        f.analytic_minimum = [](const Params& p) { return p.beta(); };
        return f;
    }
    if (name == "crease") return piecewise(name, kinked(length, 2.0), ReferenceKind::None);
    if (name == "steep_crease") {
        Fixture f = piecewise(name, kinked(length, 20.0), ReferenceKind::Analytic);
        f.analytic_minimum = [](const Params& p) { return p.alpha(); };
        return f;
    }
    if (name == "quadratic") {
        return piecewise(name, PiecewiseH2(length, {}, {Polynomial{0.0, 0.0, 1.0}}), ReferenceKind::FineGrid);
    }
    if (name == "jump_crease") return piecewise(name, jump_crease(length), ReferenceKind::None);
    if (name == "smooth") {
        Fixture f;
        f.name = name;
        f.length = length;
        f.profile = [length](double x) { return std::sin(2.0 * std::numbers::pi * x / length); };
        f.reference = ReferenceKind::FineGrid;
        return f;
    }
    throw InputError("unknown fixture '" + name + "'");
}

Fixture fixture_from_shape(std::string name, PiecewiseH2 shape) {
    return piecewise(std::move(name), std::move(shape), ReferenceKind::None);
}

}  // namespace bz
