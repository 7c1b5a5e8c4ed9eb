#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bz/energies.hpp"
#include "bz/lattice.hpp"
#include "bz/pwh2.hpp"

namespace bz {

enum class SolverKind { Exact, Alternating, Continuation };

const char* solver_name(SolverKind k);
SolverKind solver_from_name(const std::string& name);

/// Run parameters read from a config JSON file. Every key is optional;
/// unknown keys are rejected.
struct RunConfig {
    std::optional<double> length;  // L; when absent the signal file's last x is used
    Params params = Params::defaults();
    SolverKind solver = SolverKind::Continuation;
    std::size_t stages = 5;
    std::size_t max_iter = 200;
    std::size_t enumeration_cap = 12;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
std::string format_config(const RunConfig& c);

/// Signal CSV: optional '#' comment lines, header "x,g", then one row per node.
/// The x column must match L*i/n to within 1e-9 lambda.
DiscreteSignal parse_signal_csv(const std::string& text, const RunConfig& c,
                                const std::string& source = "<signal>");
std::string format_signal_csv(const DiscreteSignal& g, const std::vector<std::string>& comments = {});

/// Reconstruction CSV: header "x,u,g,label"; boundary nodes carry 'S'.
struct Reconstruction {
    DiscreteSignal u;
    DiscreteSignal data;
    LabelField labels;

    friend bool operator==(const Reconstruction&, const Reconstruction&) = default;
};

Reconstruction parse_reconstruction_csv(const std::string& text, const RunConfig& c,
                                        const std::string& source = "<reconstruction>");
std::string format_reconstruction_csv(const Reconstruction& r);

/// {"L", "max_degree", "knots": [{"at", "kind"}], "pieces": [[c0, c1, ...], ...]}
PiecewiseH2 parse_piecewise_json(const std::string& text, const std::string& source = "<piecewise>");
std::string format_piecewise_json(const PiecewiseH2& v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

/// %.17g; round-trips every finite double.
std::string format_double(double x);

}  // namespace bz
