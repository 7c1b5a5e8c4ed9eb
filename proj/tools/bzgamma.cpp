// bzgamma: denoising, convergence sweeps and recovery checks for the
// second-order free-discontinuity energies.
//
// Exit codes: 0 success, 2 input error, 3 precondition violation,
// 4 verification failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bz/energies.hpp"
#include "bz/errors.hpp"
#include "bz/harness.hpp"
#include "bz/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string input;
    std::string output;
    std::string fixture;
    std::string data;
    std::vector<std::size_t> n_list;
    std::size_t n = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

bz::RunConfig load_config(const Options& o) {
    if (o.config.empty()) return {};
    return bz::parse_config(bz::read_file(o.config), o.config);
}

void emit(const Options& o, const std::string& extension, const std::string& contents) {
    if (o.output.empty()) {
        std::cout << contents;
        return;
    }
    fs::path path(o.output);
    path.replace_extension(extension);
    bz::write_file(path, contents);
}

bool is_json(const std::string& path) { return fs::path(path).extension() == ".json"; }

bz::Fixture load_fixture(const Options& o, const bz::RunConfig& c) {
    if (!o.fixture.empty() && !o.input.empty()) throw bz::InputError("give either --fixture or --input, not both");
    if (!o.fixture.empty()) return bz::make_fixture(o.fixture, c.length.value_or(1.0));
    if (o.input.empty()) throw bz::InputError("one of --fixture or --input is required");
    return bz::fixture_from_shape(fs::path(o.input).stem().string(),
                                  bz::parse_piecewise_json(bz::read_file(o.input), o.input));
}

bz::DiscreteSignal load_signal(const Options& o, const bz::RunConfig& c) {
    if (!o.fixture.empty()) {
        if (o.n == 0) throw bz::InputError("--fixture needs --n");
        const bz::Fixture f = bz::make_fixture(o.fixture, c.length.value_or(1.0));
        return f.sample(bz::make_grid(f.length, o.n, c.params));
    }
    if (o.input.empty()) throw bz::InputError("one of --fixture or --input is required");
    return bz::parse_signal_csv(bz::read_file(o.input), c, o.input);
}

void run_denoise(const Options& o) {
    const bz::RunConfig c = load_config(o);
    const bz::DenoiseResult r = bz::run_denoise(load_signal(o, c), c);
    if (!o.output.empty()) emit(o, ".csv", bz::format_reconstruction_csv(r.reconstruction));
    emit(o, ".json", bz::format_denoise_report(r.report));
}

void run_sweep(const Options& o) {
    const bz::RunConfig c = load_config(o);
    if (o.n_list.empty()) throw bz::InputError("--n-list is required");
    emit(o, ".json", bz::format_sweep(bz::run_sweep(load_fixture(o, c), o.n_list, c)));
}

void run_recovery(const Options& o) {
    const bz::RunConfig c = load_config(o);
    if (o.n_list.empty()) throw bz::InputError("--n-list is required");
    const bz::Fixture f = load_fixture(o, c);
    if (!f.shape) throw bz::InputError("fixture '" + f.name + "' has no piecewise shape");
    emit(o, ".csv", bz::format_recovery_csv(bz::run_recovery_check(*f.shape, o.n_list, c.params)));
}

void run_noise(const Options& o) {
    const bz::RunConfig c = load_config(o);
    const bz::DiscreteSignal g = load_signal(o, c);
    const bz::DiscreteSignal noisy = bz::add_noise(g, o.sigma, o.seed);
    emit(o, ".csv",
         bz::format_signal_csv(noisy, {"noise sigma=" + bz::format_double(o.sigma) + " seed=" + std::to_string(o.seed)}));
}

void run_energy(const Options& o) {
    const bz::RunConfig c = load_config(o);
    bz::EnergyBreakdown e;
    if (o.fixture.empty() && is_json(o.input)) {
        e = bz::continuum_energy(bz::parse_piecewise_json(bz::read_file(o.input), o.input), c.params);
    } else {
        const bz::DiscreteSignal u = load_signal(o, c);
        if (o.data.empty()) {
            e = bz::discrete_energy(u, c.params);
        } else {
            const bz::DiscreteSignal data = bz::parse_signal_csv(bz::read_file(o.data), c, o.data);
            e = bz::objective(u, data, c.params);
        }
    }
    emit(o, ".json",
         "{\n  \"quadratic_part\": " + bz::format_double(e.quadratic_part) +
             ",\n  \"crease_count\": " + std::to_string(e.crease_count) +
             ",\n  \"jump_half_count\": " + std::to_string(e.jump_half_count) +
             ",\n  \"penalty_part\": " + bz::format_double(e.penalty_part) +
             ",\n  \"fidelity\": " + bz::format_double(e.fidelity) +
             ",\n  \"total\": " + bz::format_double(e.total) + "\n}\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Second-order free-discontinuity energies: denoising and convergence checks"};
    app.require_subcommand(1);
    Options o;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Config JSON");
        sub->add_option("--output", o.output, "Output path stem (extension is replaced)");
    };

    CLI::App* denoise = app.add_subcommand("denoise", "Minimize the penalized objective for a signal");
    common(denoise);
    denoise->add_option("--input", o.input, "Signal CSV");
    denoise->add_option("--fixture", o.fixture, "Named fixture instead of --input");
    denoise->add_option("--n", o.n, "Resolution for --fixture");

    CLI::App* sweep = app.add_subcommand("sweep", "Minimum values over a list of resolutions");
    common(sweep);
    sweep->add_option("--input", o.input, "Piecewise JSON shape");
    sweep->add_option("--fixture", o.fixture, "Named fixture");
    sweep->add_option("--n-list", o.n_list, "Comma-separated resolutions")->delimiter(',');

    CLI::App* recovery = app.add_subcommand("recovery-check", "Discrete energy of sampled shapes against the limit");
    common(recovery);
    recovery->add_option("--input", o.input, "Piecewise JSON shape");
    recovery->add_option("--fixture", o.fixture, "Named fixture");
    recovery->add_option("--n-list", o.n_list, "Comma-separated resolutions")->delimiter(',');

    CLI::App* noise = app.add_subcommand("noise", "Add Gaussian noise to a signal");
    common(noise);
    noise->add_option("--input", o.input, "Signal CSV");
    noise->add_option("--fixture", o.fixture, "Named fixture instead of --input");
    noise->add_option("--n", o.n, "Resolution for --fixture");
    noise->add_option("--sigma", o.sigma, "Standard deviation")->required();
    noise->add_option("--seed", o.seed, "Generator seed")->required();

    CLI::App* energy = app.add_subcommand("energy", "Evaluate energies without solving");
    common(energy);
    energy->add_option("--input", o.input, "Signal CSV, or piecewise JSON for the continuum energy");
    energy->add_option("--fixture", o.fixture, "Named fixture instead of --input");
    energy->add_option("--n", o.n, "Resolution for --fixture");
    energy->add_option("--data", o.data, "Data CSV; adds the fidelity term");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*denoise) run_denoise(o);
        if (*sweep) run_sweep(o);
        if (*recovery) run_recovery(o);
        if (*noise) run_noise(o);
        if (*energy) run_energy(o);
    } catch (const bz::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const bz::PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 3;
    } catch (const bz::VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
