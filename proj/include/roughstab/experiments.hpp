#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "roughstab/dynamics.hpp"
#include "roughstab/lyapunov.hpp"
#include "roughstab/types.hpp"

namespace roughstab {

inline constexpr const char* kVersion = "0.1.0";

enum class SystemKind { motivational_2d, example_1d, custom };
enum class DriverKind { none, oscillatory, oscillatory_limit, wiener };

std::string to_string(SystemKind kind);
std::string to_string(DriverKind kind);

/// One simulation run. Parsed from `key = value` text with `#` comments.
struct Scenario {
    std::string name = "scenario";
    SystemKind system = SystemKind::motivational_2d;
    std::vector<Mat> custom_matrices;  ///< g_j(x) = A_j x + c_j for system = custom
    std::vector<Vec> custom_offsets;
    DriverKind driver = DriverKind::none;
    double b1 = 3.0;
    double b2 = 4.0;
    unsigned eta = 100;
    std::uint64_t seed = 1;
    std::size_t cells = 10000;  ///< Wong-Zakai cells N
    double horizon = 1.0;
    double step = 1e-3;
    Vec x0;                     ///< empty: system default
    bool lyapunov = false;      ///< quadratic candidate v = x^T x
    std::string output = "out";
    GridSpec grid;
};

Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& filename);

/// Text form accepted by parse_scenario.
std::string scenario_text(const Scenario& s);

VectorFieldSystem build_system(const Scenario& s);
Vec initial_state(const Scenario& s);

struct ManifestEntry {
    std::string file;
    std::string sha256;
    std::size_t bytes = 0;
};

struct RunManifest {
    std::string scenario;
    std::vector<std::uint64_t> seeds;
    std::string version = kVersion;
    double wall_clock_seconds = 0.0;
    std::vector<ManifestEntry> files;
    std::vector<std::string> notes;  ///< verdict summaries
};

std::string sha256_file(const std::string& filename);
void write_manifest(std::ostream& out, const RunManifest& manifest);

/// Emits trajectory.csv, v_trajectory.csv and report.csv (when lyapunov is
/// set), plot.gp and manifest.txt into s.output. BlowUp propagates.
RunManifest run_scenario(const Scenario& s);

/// Limit drift of the scenario's driver (oscillatory rates, or g_0 for none).
VectorField scenario_limit_drift(const Scenario& s);

struct ConvergenceRow {
    unsigned eta = 0;
    double gap = 0.0;
    bool ok = true;  ///< false when the gap did not decrease from the previous row
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    bool monotone = true;
};

/// Sup-norm gaps at shared sample times between finite-eta trajectories and
/// the limit ODE trajectory.
ConvergenceTable convergence_study(const std::vector<unsigned>& etas, const Scenario& s,
                                   Execution exec = Execution::parallel);

struct CompareOptions {
    std::vector<unsigned> etas{10, 100};
    double deterministic_horizon = 5.0;
    std::vector<double> steps{1e-2, 1e-3, 1e-4};
    double stochastic_horizon = 1.0;
    std::size_t seeds = 100;
    std::uint64_t base_seed = 1;
    Execution execution = Execution::parallel;
};

struct DeterministicExcursion {
    unsigned eta = 0;
    double max_excursion = 0.0;
};

struct StochasticExcursion {
    double step = 0.0;
    double median_max_excursion = 0.0;
    std::size_t blowups = 0;
};

struct NoiseComparison {
    std::vector<DeterministicExcursion> deterministic;
    std::vector<StochasticExcursion> stochastic;
};

/// Oscillatory versus Wiener driving of the scalar example from x0 = 0.
NoiseComparison compare_noise_types(const Scenario& s, const CompareOptions& opts = {});

/// CSV data behind the three figures plus a gnuplot script.
RunManifest generate_figures(const std::string& out_dir, std::uint64_t seed = 1);

}  // namespace roughstab
