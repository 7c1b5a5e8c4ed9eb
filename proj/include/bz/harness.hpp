#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bz/io.hpp"
#include "bz/solvers.hpp"

namespace bz {

enum class ReferenceKind { Analytic, FineGrid, None };

const char* reference_name(ReferenceKind k);
ReferenceKind reference_from_name(const std::string& name);

/// Continuum input signal that can be resampled at any resolution.
///
/// Piecewise fixtures carry their shape and are sampled by snapping the
/// breakpoints to the grid and taking left limits. Smooth fixtures are
/// sampled pointwise.
struct Fixture {
    std::string name;
    double length = 1.0;
    std::optional<PiecewiseH2> shape;
    std::function<double(double)> profile;
    ReferenceKind reference = ReferenceKind::None;
    // Continuum minimum for Analytic fixtures, as a function of the parameters.
    std::function<double(const Params&)> analytic_minimum;

    DiscreteSignal sample(const GridSpec& g) const;
};

/// constant, step, crease, steep_crease, smooth, quadratic, jump_crease.
///   step          0 then 5 past L/2
///   crease        0 then slope 2 past L/2
///   steep_crease  0 then slope 20 past L/2; a lone crease is optimal only once
///                 c2 is large enough that slope jump 20 stays below lambda t2
///   smooth        sin(2 pi x / L)
///   quadratic     x^2
///   jump_crease   x^2, crease at L/4, jump at L/2
Fixture make_fixture(const std::string& name, double length = 1.0);
std::vector<std::string> fixture_names();

/// Fixture whose shape is read from a piecewise JSON file.
Fixture fixture_from_shape(std::string name, PiecewiseH2 shape);

struct DetectedJump {
    double at = 0.0;           // shared cell boundary x_{k+1} of a pair (k, k+1); x_k if isolated
    std::size_t node = 0;      // first JumpHalf node
    bool anomalous = false;    // isolated JumpHalf node
    friend bool operator==(const DetectedJump&, const DetectedJump&) = default;
};

struct DetectedCrease {
    double at = 0.0;
    std::size_t node = 0;
    friend bool operator==(const DetectedCrease&, const DetectedCrease&) = default;
};

struct Features {
    std::vector<DetectedJump> jumps;
    std::vector<DetectedCrease> creases;
    friend bool operator==(const Features&, const Features&) = default;
};

/// Adjacent JumpHalf pairs become one jump; a leftover JumpHalf is reported alone.
Features detect_features(const DiscreteSignal& u, const LabelField& labels);

struct TraceSummary {
    std::size_t length = 0;
    double first = 0.0;
    double last = 0.0;
    friend bool operator==(const TraceSummary&, const TraceSummary&) = default;
};

struct DenoiseReport {
    std::string solver;
    std::string status;
    double length = 0.0;
    std::size_t n = 0;
    Params params = Params::defaults();
    EnergyBreakdown breakdown;
    double verified_total = 0.0;
    std::size_t iterations = 0;
    TraceSummary trace;
    bool near_threshold = false;
    Features features;
    friend bool operator==(const DenoiseReport&, const DenoiseReport&) = default;
};

struct DenoiseResult {
    Reconstruction reconstruction;
    DenoiseReport report;
};

/// Runs the configured solver; throws VerificationError unless the reported
/// total matches a fresh objective evaluation to 1e-10 relative.
SolveReport solve_configured(const DiscreteSignal& data, const RunConfig& c);
DenoiseResult run_denoise(const DiscreteSignal& data, const RunConfig& c);

std::string format_denoise_report(const DenoiseReport& r);
DenoiseReport parse_denoise_report(const std::string& text, const std::string& source = "<report>");

struct SweepRow {
    std::size_t n = 0;
    double lambda = 0.0;
    double m_n = 0.0;
    std::string status;
    std::size_t crease_count = 0;
    std::size_t jump_half_count = 0;
    double wall_time = 0.0;  // seconds
    std::optional<double> exact_total;      // solve_exact cross-check, when enumerable
    std::optional<double> reference_gap;    // |m_n - reference_m|
    bool verified = false;
    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepResult {
    std::string fixture;
    double length = 1.0;
    Params params = Params::defaults();
    ReferenceKind reference = ReferenceKind::None;
    std::optional<double> reference_m;
    std::vector<SweepRow> rows;  // ascending n
    friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Resolution of the all-Smooth reference solve for smooth fixtures.
inline constexpr std::size_t kFineGridN = 10000;

/// Minimum of the all-Smooth frozen problem for f sampled at n nodes, scored
/// under the true objective.
double fine_grid_reference(const Fixture& f, const Params& p, std::size_t n = kFineGridN);

/// m_n by continuation (or the configured solver), cross-checked by exact
/// enumeration whenever n - 1 <= enumeration_cap; m_n is the smaller of the two.
SweepResult run_sweep(const Fixture& f, std::vector<std::size_t> n_list, const RunConfig& c);

std::string format_sweep(const SweepResult& s);
SweepResult parse_sweep(const std::string& text, const std::string& source = "<sweep>");

struct RecoveryRow {
    std::size_t n = 0;
    double lambda = 0.0;
    bool snapped = false;             // false: snapping precondition failed, row flagged
    double energy = 0.0;              // E_n(sample_recovery(snap(v)))
    double continuum = 0.0;           // F(v)
    double gap = 0.0;                 // energy - continuum
    double quadratic_part = 0.0;
    double penalty_part = 0.0;
    bool conditions_hold = false;     // analytic classification conditions at this n
    friend bool operator==(const RecoveryRow&, const RecoveryRow&) = default;
};

std::vector<RecoveryRow> run_recovery_check(const PiecewiseH2& v, const std::vector<std::size_t>& n_list,
                                            const Params& p);

std::string format_recovery_csv(const std::vector<RecoveryRow>& rows);
std::vector<RecoveryRow> parse_recovery_csv(const std::string& text,
                                            const std::string& source = "<recovery>");

/// g + sigma * N(0, 1) per node from a mt19937_64 seeded with seed.
DiscreteSignal add_noise(const DiscreteSignal& g, double sigma, std::uint64_t seed);

}  // namespace bz
