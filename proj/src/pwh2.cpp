#include "bz/pwh2.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "bz/errors.hpp"

namespace bz {

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw PreconditionError("Polynomial: non-finite coefficient");
    }
}

std::size_t Polynomial::degree() const {
    std::size_t d = coeffs_.size() - 1;
    while (d > 0 && coeffs_[d] == 0.0) --d;
    return d;
}

double Polynomial::operator()(double s) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() == 1) return Polynomial{0.0};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(double h) const {
    std::vector<double> c = coeffs_;
    const std::size_t d = c.size() - 1;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = d - 1;; --j) {
            c[j] += h * c[j + 1];
            if (j == i) break;
        }
    }
    return Polynomial(std::move(c));
}

Polynomial Polynomial::rescaled(double k) const {
    std::vector<double> c = coeffs_;
    double power = 1.0;
    for (double& ci : c) {
        ci *= power;
        power *= k;
    }
    return Polynomial(std::move(c));
}

double Polynomial::integral_of_square(double h) const {
    const std::size_t d = coeffs_.size() - 1;
    std::vector<double> sq(2 * d + 1, 0.0);
    for (std::size_t i = 0; i <= d; ++i)
        for (std::size_t j = 0; j <= d; ++j) sq[i + j] += coeffs_[i] * coeffs_[j];
    double acc = 0.0;
    for (std::size_t m = sq.size(); m-- > 0;) acc = acc * h + sq[m] / static_cast<double>(m + 1);
    return acc * h;
}

double Polynomial::sup_bound(double h) const {
    const std::size_t d = degree();
    if (d <= 1) return std::max(std::abs((*this)(0.0)), std::abs((*this)(h)));
    if (d == 2) {
        double m = std::max(std::abs((*this)(0.0)), std::abs((*this)(h)));
        const double vertex = -coeffs_[1] / (2.0 * coeffs_[2]);
        if (vertex > 0.0 && vertex < h) m = std::max(m, std::abs((*this)(vertex)));
        return m;
    }
    double acc = 0.0;
    double power = 1.0;
    for (double c : coeffs_) {
        acc += std::abs(c) * power;
        power *= h;
    }
    return acc;
}

// ---------------------------------------------------------------- knots

const char* knot_kind_name(KnotKind k) {
    switch (k) {
        case KnotKind::Jump: return "jump";
        case KnotKind::Crease: return "crease";
        case KnotKind::Join: return "join";
    }
    return "?";
}

KnotKind knot_kind_from_name(const std::string& name) {
    if (name == "jump") return KnotKind::Jump;
    if (name == "crease") return KnotKind::Crease;
    if (name == "join") return KnotKind::Join;
    throw PreconditionError("unknown knot kind '" + name + "'");
}

namespace {

bool differs(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) > kKnotTolerance * scale;
}

struct KnotTrace {
    double left_value, right_value, left_slope, right_slope;
};

KnotTrace trace_at(const Polynomial& left, double left_start, const Polynomial& right, double t) {
    const double s = t - left_start;
    return {left(s), right(0.0), left.derivative()(s), right.derivative()(0.0)};
}

}  // namespace

KnotKind infer_knot_kind(const Polynomial& left, double left_start, const Polynomial& right,
                         double t) {
    const KnotTrace k = trace_at(left, left_start, right, t);
    if (differs(k.left_value, k.right_value)) return KnotKind::Jump;
    if (differs(k.left_slope, k.right_slope)) return KnotKind::Crease;
    return KnotKind::Join;
}

KnotKind classify_breakpoint(const Polynomial& left, double left_start, const Polynomial& right,
                             double t) {
    const KnotKind kind = infer_knot_kind(left, left_start, right, t);
    if (kind != KnotKind::Join) return kind;
    throw PreconditionError("spurious breakpoint at x=" + std::to_string(t) +
                            ": value and slope both continuous");
}

// ---------------------------------------------------------------- PiecewiseH2

PiecewiseH2::PiecewiseH2(double length, std::vector<Knot> knots, std::vector<Polynomial> pieces,
                         std::size_t max_degree)
    : length_(length), knots_(std::move(knots)), pieces_(std::move(pieces)), max_degree_(max_degree) {
    if (!(length_ > 0.0) || !std::isfinite(length_)) {
        throw PreconditionError("PiecewiseH2: length must be positive and finite");
    }
    if (pieces_.size() != knots_.size() + 1) {
        throw PreconditionError("PiecewiseH2: need exactly one more piece than knots");
    }
    for (std::size_t k = 0; k < knots_.size(); ++k) {
        const double t = knots_[k].at;
        if (!(t > 0.0 && t < length_)) {
            throw PreconditionError("PiecewiseH2: knot " + std::to_string(t) + " outside (0, L)");
        }
        if (k > 0 && !(knots_[k - 1].at < t)) {
            throw PreconditionError("PiecewiseH2: knots must be strictly increasing");
        }
    }
    for (const Polynomial& piece : pieces_) {
        if (piece.degree() > max_degree_) {
            throw PreconditionError("PiecewiseH2: piece degree " + std::to_string(piece.degree()) +
                                    " exceeds " + std::to_string(max_degree_));
        }
    }
    for (std::size_t k = 0; k < knots_.size(); ++k) {
        const Knot& knot = knots_[k];
        const KnotTrace tr = trace_at(pieces_[k], piece_start(k), pieces_[k + 1], knot.at);
        const bool value_gap = differs(tr.left_value, tr.right_value);
        const bool slope_gap = differs(tr.left_slope, tr.right_slope);
        const bool ok = (knot.kind == KnotKind::Jump && value_gap) ||
                        (knot.kind == KnotKind::Crease && !value_gap && slope_gap) ||
                        (knot.kind == KnotKind::Join && !value_gap && !slope_gap);
        if (!ok) {
            throw PreconditionError(std::string("PiecewiseH2: knot at x=") + std::to_string(knot.at) +
                                    " declared " + knot_kind_name(knot.kind) +
                                    " but the adjacent pieces disagree");
        }
    }
}

PiecewiseH2 PiecewiseH2::from_breakpoints(double length, std::vector<double> at,
                                          std::vector<Polynomial> pieces, std::size_t max_degree) {
    if (pieces.size() != at.size() + 1) {
        throw PreconditionError("PiecewiseH2: need exactly one more piece than breakpoints");
    }
    std::vector<Knot> knots;
    knots.reserve(at.size());
    for (std::size_t k = 0; k < at.size(); ++k) {
        const double start = k == 0 ? 0.0 : at[k - 1];
        knots.push_back({at[k], classify_breakpoint(pieces[k], start, pieces[k + 1], at[k])});
    }
    return PiecewiseH2(length, std::move(knots), std::move(pieces), max_degree);
}

std::size_t PiecewiseH2::piece_index_right(double x) const {
    if (!(x >= 0.0 && x <= length_)) throw std::out_of_range("PiecewiseH2: x outside [0, L]");
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                                     [](double v, const Knot& k) { return v < k.at; });
    return static_cast<std::size_t>(it - knots_.begin());
}

std::size_t PiecewiseH2::piece_index_left(double x) const {
    if (!(x >= 0.0 && x <= length_)) throw std::out_of_range("PiecewiseH2: x outside [0, L]");
    const auto it = std::lower_bound(knots_.begin(), knots_.end(), x,
                                     [](const Knot& k, double v) { return k.at < v; });
    return static_cast<std::size_t>(it - knots_.begin());
}

double PiecewiseH2::value(double x) const { return right_limit(x); }

double PiecewiseH2::right_limit(double x) const {
    const std::size_t k = piece_index_right(x);
    return pieces_[k](x - piece_start(k));
}

double PiecewiseH2::left_limit(double x) const {
    const std::size_t k = piece_index_left(x);
    return pieces_[k](x - piece_start(k));
}

double PiecewiseH2::slope_right(double x) const {
    const std::size_t k = piece_index_right(x);
    return pieces_[k].derivative()(x - piece_start(k));
}

double PiecewiseH2::slope_left(double x) const {
    const std::size_t k = piece_index_left(x);
    return pieces_[k].derivative()(x - piece_start(k));
}

std::vector<double> PiecewiseH2::jump_points() const {
    std::vector<double> out;
    for (const Knot& k : knots_)
        if (k.kind == KnotKind::Jump) out.push_back(k.at);
    return out;
}

std::vector<double> PiecewiseH2::crease_points() const {
    std::vector<double> out;
    for (const Knot& k : knots_)
        if (k.kind == KnotKind::Crease) out.push_back(k.at);
    return out;
}

std::vector<Knot> PiecewiseH2::breakpoints() const {
    std::vector<Knot> out;
    for (const Knot& k : knots_)
        if (k.kind != KnotKind::Join) out.push_back(k);
    return out;
}

double PiecewiseH2::jump_height(std::size_t knot_index) const {
    const double t = knots_.at(knot_index).at;
    return pieces_[knot_index + 1](0.0) - pieces_[knot_index](t - piece_start(knot_index));
}

double PiecewiseH2::slope_jump(std::size_t knot_index) const {
    const double t = knots_.at(knot_index).at;
    return pieces_[knot_index + 1].derivative()(0.0) -
           pieces_[knot_index].derivative()(t - piece_start(knot_index));
}

double PiecewiseH2::curvature_integral() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        acc += pieces_[k].derivative().derivative().integral_of_square(piece_end(k) - piece_start(k));
    }
    return acc;
}

double PiecewiseH2::curvature_bound() const {
    double m = 0.0;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        m = std::max(m, pieces_[k].derivative().derivative().sup_bound(piece_end(k) - piece_start(k)));
    }
    return m;
}

double PiecewiseH2::lipschitz_bound() const {
    double m = 0.0;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        m = std::max(m, pieces_[k].derivative().sup_bound(piece_end(k) - piece_start(k)));
    }
    return m;
}

// ---------------------------------------------------------------- grid coupling

namespace {

constexpr double kGridTolerance = 1e-9;

std::size_t nearest_node(double t, const GridSpec& g) {
    const double r = std::round(t * static_cast<double>(g.n()) / g.length());
    return static_cast<std::size_t>(std::max(0.0, r));
}

void require_same_length(const PiecewiseH2& v, const GridSpec& g, const char* who) {
    if (std::abs(v.length() - g.length()) > 1e-12 * std::max(1.0, g.length())) {
        throw PreconditionError(std::string(who) + ": function length differs from grid length");
    }
}

}  // namespace

bool breakpoints_on_grid(const PiecewiseH2& v, const GridSpec& g) {
    const double tol = kGridTolerance * g.lambda();
    for (const Knot& k : v.breakpoints()) {
        if (std::abs(k.at - g.node(nearest_node(k.at, g))) > tol) return false;
    }
    return true;
}

PiecewiseH2 snap_breakpoints(const PiecewiseH2& v, const GridSpec& g) {
    require_same_length(v, g, "snap_breakpoints");
    const double lambda = g.lambda();
    const double slack = kGridTolerance * lambda;

    // Anchors: 0, every breakpoint, L. Old and new positions side by side.
    std::vector<double> old_anchor{0.0};
    std::vector<double> new_anchor{0.0};
    for (const Knot& k : v.breakpoints()) {
        if (k.at < lambda - slack || v.length() - k.at < lambda - slack) {
            throw PreconditionError("snap_breakpoints: breakpoint at x=" + std::to_string(k.at) +
                                    " closer than lambda to the boundary");
        }
        if (old_anchor.size() > 1 && k.at - old_anchor.back() < 2.0 * lambda - slack) {
            throw PreconditionError("snap_breakpoints: breakpoints at x=" +
                                    std::to_string(old_anchor.back()) + " and x=" +
                                    std::to_string(k.at) + " closer than 2 lambda");
        }
        old_anchor.push_back(k.at);
        new_anchor.push_back(g.node(nearest_node(k.at, g)));
    }
    old_anchor.push_back(v.length());
    new_anchor.push_back(v.length());

    std::vector<Knot> knots;
    std::vector<Polynomial> pieces;
    std::size_t segment = 0;  // anchor interval containing the current piece
    for (std::size_t p = 0; p < v.pieces().size(); ++p) {
        const bool unchanged = old_anchor[segment] == new_anchor[segment] &&
                               old_anchor[segment + 1] == new_anchor[segment + 1];
        const double stretch = (old_anchor[segment + 1] - old_anchor[segment]) /
                               (new_anchor[segment + 1] - new_anchor[segment]);
        pieces.push_back(unchanged ? v.pieces()[p] : v.pieces()[p].rescaled(stretch));
        if (p == v.knots().size()) break;

        const Knot& k = v.knots()[p];
        if (k.kind == KnotKind::Join) {
            const double at = unchanged ? k.at
                                        : new_anchor[segment] +
                                              (k.at - old_anchor[segment]) / stretch;
            knots.push_back({at, k.kind});
        } else {
            ++segment;
            knots.push_back({new_anchor[segment], k.kind});
        }
    }
    return PiecewiseH2(v.length(), std::move(knots), std::move(pieces), v.max_degree());
}

DiscreteSignal sample_recovery(const PiecewiseH2& v, const GridSpec& g) {
    require_same_length(v, g, "sample_recovery");
    if (!breakpoints_on_grid(v, g)) {
        throw PreconditionError("sample_recovery: breakpoints must lie on grid nodes");
    }
    // Breakpoints are compared by node index so that "left limit at x_i"
    // never depends on rounding of the stored coordinate.
    std::vector<double> position;
    position.reserve(v.knots().size());
    for (const Knot& k : v.knots()) {
        position.push_back(k.kind == KnotKind::Join ? k.at : g.node(nearest_node(k.at, g)));
    }
    const std::size_t n = g.n();
    std::vector<double> values(n + 1);
    values[0] = v.pieces().front()(0.0);
    std::size_t piece = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = g.node(i);
        while (piece < position.size() && position[piece] < x) ++piece;
        values[i] = v.pieces()[piece](x - v.piece_start(piece));
    }
    return DiscreteSignal(g, std::move(values));
}

std::vector<CaseTag> classify_cases(const DiscreteSignal& u) {
    const LabelField labels = labels_of(u);
    std::vector<CaseTag> tags;
    tags.reserve(labels.interior_count());
    for (Label l : labels.raw()) {
        switch (l) {
            case Label::Smooth: tags.push_back(CaseTag::CSmooth); break;
            case Label::Crease: tags.push_back(CaseTag::BCrease); break;
            case Label::JumpHalf: tags.push_back(CaseTag::AJump); break;
        }
    }
    return tags;
}

namespace {

struct BreakData {
    double at;
    KnotKind kind;
    double height;      // |jump|
    double slope_jump;  // |slope jump|
};

std::vector<BreakData> break_data(const PiecewiseH2& v) {
    std::vector<BreakData> out;
    for (std::size_t k = 0; k < v.knots().size(); ++k) {
        const Knot& knot = v.knots()[k];
        if (knot.kind == KnotKind::Join) continue;
        out.push_back({knot.at, knot.kind, std::abs(v.jump_height(k)), std::abs(v.slope_jump(k))});
    }
    return out;
}

// Curvature-level conditions at step lambda with thresholds t1, t2.
bool curvature_conditions(const std::vector<BreakData>& breaks, double curvature, double lambda,
                          double t1, double t2) {
    if (curvature > t1) return false;
    for (const BreakData& b : breaks) {
        if (b.kind == KnotKind::Crease) {
            if (!(b.slope_jump / lambda - curvature > t1)) return false;
            if (!(b.slope_jump / lambda + curvature <= t2)) return false;
        } else {
            const double weakest = b.height - lambda * b.slope_jump - lambda * lambda * curvature;
            if (!(weakest / (lambda * lambda) > t2)) return false;
        }
    }
    return true;
}

}  // namespace

bool recovery_conditions_hold(const PiecewiseH2& v, const GridSpec& g) {
    require_same_length(v, g, "recovery_conditions_hold");
    if (!breakpoints_on_grid(v, g)) {
        throw PreconditionError("recovery_conditions_hold: breakpoints must lie on grid nodes");
    }
    const std::size_t n = g.n();
    const auto breaks = break_data(v);
    std::size_t previous = 0;
    for (std::size_t j = 0; j < breaks.size(); ++j) {
        const std::size_t k = nearest_node(breaks[j].at, g);
        const std::size_t last = breaks[j].kind == KnotKind::Jump ? n - 2 : n - 1;
        if (k < 1 || k > last) return false;
        if (j > 0 && k < previous + 2) return false;
        previous = k;
    }
    return curvature_conditions(breaks, v.curvature_bound(), g.lambda(), g.t1(), g.t2());
}

std::size_t classification_threshold(const PiecewiseH2& v, const Params& p) {
    const double L = v.length();
    const auto breaks = break_data(v);
    const double curvature = v.curvature_bound();

    // Every clause is monotone in lambda, so the feasible set is an interval (0, lambda*].
    const auto holds = [&](double lambda) {
        const double slack = kGridTolerance * lambda;
        for (std::size_t j = 0; j < breaks.size(); ++j) {
            const double tail = breaks[j].kind == KnotKind::Jump ? 2.0 * lambda : lambda;
            if (breaks[j].at < lambda - slack || L - breaks[j].at < tail - slack) return false;
            if (j > 0 && breaks[j].at - breaks[j - 1].at < 2.0 * lambda - slack) return false;
        }
        const double root = std::sqrt(lambda);
        const double t1 = p.c1() / root;
        const double t2 = p.c2() / (lambda * root);
        if (!(t1 < t2)) return false;
        return curvature_conditions(breaks, curvature, lambda, t1, t2);
    };

    double hi = L / 2.0;
    if (holds(hi)) return 2;
    double lo = hi;
    for (int k = 0; k < 2000 && !holds(lo); ++k) lo /= 2.0;
    if (!holds(lo)) {
        throw PreconditionError("classification_threshold: conditions never hold");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid) ? lo : hi) = mid;
    }
    auto n0 = static_cast<std::size_t>(std::ceil(L / hi));
    n0 = std::max<std::size_t>(n0, 2);
    while (n0 > 2 && holds(L / static_cast<double>(n0 - 1))) --n0;
    while (!holds(L / static_cast<double>(n0))) ++n0;
    return n0;
}

// ---------------------------------------------------------------- distances

namespace {

// Calls f(poly, a, b) for the difference v - u on every maximal interval
// [a, b] lying inside one cell and one piece; poly is in s = x - a.
template <typename F>
void for_each_cell_piece(const PiecewiseH2& v, const DiscreteSignal& u, F&& f) {
    const GridSpec& g = u.grid();
    require_same_length(v, g, "distance");
    std::size_t piece = 0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        const double x0 = g.node(i);
        const double x1 = g.node(i + 1);
        while (piece + 1 < v.pieces().size() && v.piece_end(piece) <= x0) ++piece;
        for (std::size_t p = piece; p < v.pieces().size(); ++p) {
            const double a = std::max(x0, v.piece_start(p));
            const double b = std::min(x1, v.piece_end(p));
            if (b > a) {
                std::vector<double> c = v.pieces()[p].shifted(a - v.piece_start(p)).coeffs();
                c[0] -= u[i];
                f(Polynomial(std::move(c)), a, b);
            }
            if (v.piece_end(p) >= x1) break;
        }
    }
}

}  // namespace

double l2_distance(const PiecewiseH2& v, const DiscreteSignal& u) {
    double acc = 0.0;
    for_each_cell_piece(v, u, [&](const Polynomial& q, double a, double b) {
        acc += q.integral_of_square(b - a);
    });
    return std::sqrt(acc);
}

double l1_distance(const PiecewiseH2& v, const DiscreteSignal& u) {
    static constexpr std::array<double, 4> kNodes{0.1834346424956498, 0.5255324099163290,
                                                  0.7966664774136267, 0.9602898564975363};
    static constexpr std::array<double, 4> kWeights{0.3626837833783620, 0.3137066458778873,
                                                    0.2223810344533745, 0.1012285362903763};
    constexpr int kSub = 16;
    double acc = 0.0;
    for_each_cell_piece(v, u, [&](const Polynomial& q, double a, double b) {
        const double h = (b - a) / kSub;
        for (int s = 0; s < kSub; ++s) {
            const double mid = (s + 0.5) * h;
            for (std::size_t k = 0; k < kNodes.size(); ++k) {
                const double off = 0.5 * h * kNodes[k];
                acc += 0.5 * h * kWeights[k] * (std::abs(q(mid - off)) + std::abs(q(mid + off)));
            }
        }
    });
    return acc;
}

}  // namespace bz
