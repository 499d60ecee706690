#include "roughstab/experiments.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "roughstab/ensemble.hpp"
#include "roughstab/errors.hpp"

namespace roughstab {

namespace fs = std::filesystem;

std::string to_string(SystemKind kind) {
    switch (kind) {
        case SystemKind::motivational_2d: return "motivational-2d";
        case SystemKind::example_1d: return "example-1d";
        case SystemKind::custom: return "custom";
    }
    return "unknown";
}

std::string to_string(DriverKind kind) {
    switch (kind) {
        case DriverKind::none: return "none";
        case DriverKind::oscillatory: return "oscillatory";
        case DriverKind::oscillatory_limit: return "oscillatory-limit";
        case DriverKind::wiener: return "wiener";
    }
    return "unknown";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (const std::logic_error&) {
    }
    throw ConfigError("scenario: '" + key + "' expects a number, got '" + text + "'");
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
        const auto v = std::stoull(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (const std::logic_error&) {
    }
    throw ConfigError("scenario: '" + key + "' expects a non-negative integer, got '" + text + "'");
}

std::vector<double> to_numbers(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::string cleaned = text;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream ss(cleaned);
    std::string tok;
    while (ss >> tok) out.push_back(to_double(key, tok));
    return out;
}

Vec to_vector(const std::string& key, const std::string& text) {
    const auto nums = to_numbers(key, text);
    if (nums.empty()) throw ConfigError("scenario: '" + key + "' is empty");
    return Eigen::Map<const Vec>(nums.data(), static_cast<Eigen::Index>(nums.size()));
}

/// Rows separated by ';', entries by ',' or whitespace.
Mat to_matrix(const std::string& key, const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(to_numbers(key, row));
    if (rows.empty() || rows.size() != rows.front().size()) {
        throw ConfigError("scenario: '" + key + "' must be a square matrix 'a, b; c, d'");
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (rows[static_cast<std::size_t>(i)].size() != rows.size()) {
            throw ConfigError("scenario: '" + key + "' has ragged rows");
        }
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return m;
}

std::string join(const Vec& v, const char* sep = ", ") {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += format_double(v[i]);
    }
    return out;
}

std::string matrix_text(const Mat& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i) out += "; ";
        out += join(m.row(i).transpose());
    }
    return out;
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
    Scenario s;
    std::map<std::size_t, Mat> matrices;
    std::map<std::size_t, Vec> offsets;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("scenario line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "name") {
            s.name = val;
        } else if (key == "system") {
            if (val == "motivational-2d") s.system = SystemKind::motivational_2d;
            else if (val == "example-1d") s.system = SystemKind::example_1d;
            else if (val == "custom") s.system = SystemKind::custom;
            else throw ConfigError("scenario: unknown system '" + val + "'");
        } else if (key == "driver") {
            if (val == "none") s.driver = DriverKind::none;
            else if (val == "oscillatory") s.driver = DriverKind::oscillatory;
            else if (val == "oscillatory-limit") s.driver = DriverKind::oscillatory_limit;
            else if (val == "wiener") s.driver = DriverKind::wiener;
            else throw ConfigError("scenario: unknown driver '" + val + "'");
        } else if (key == "b1") {
            s.b1 = to_double(key, val);
        } else if (key == "b2") {
            s.b2 = to_double(key, val);
        } else if (key == "eta") {
            const auto eta = to_u64(key, val);
            if (eta < 1 || eta > 0xFFFFFFFFULL) throw ConfigError("scenario: eta must be a positive 32-bit integer");
            s.eta = static_cast<unsigned>(eta);
        } else if (key == "seed") {
            s.seed = to_u64(key, val);
        } else if (key == "cells") {
            s.cells = static_cast<std::size_t>(to_u64(key, val));
        } else if (key == "horizon") {
            s.horizon = to_double(key, val);
        } else if (key == "step") {
            s.step = to_double(key, val);
        } else if (key == "x0") {
            s.x0 = to_vector(key, val);
        } else if (key == "lyapunov") {
            if (val == "quadratic") s.lyapunov = true;
            else if (val == "none") s.lyapunov = false;
            else throw ConfigError("scenario: unknown lyapunov candidate '" + val + "'");
        } else if (key == "output") {
            s.output = val;
        } else if (key == "grid") {
            s.grid = parse_grid_spec(val);
        } else if (key.size() >= 2 && (key[0] == 'g' || key[0] == 'c') &&
                   std::all_of(key.begin() + 1, key.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
            const auto idx = static_cast<std::size_t>(std::stoul(key.substr(1)));
            if (key[0] == 'g') matrices[idx] = to_matrix(key, val);
            else offsets[idx] = to_vector(key, val);
        } else {
            throw ConfigError("scenario: unknown key '" + key + "'");
        }
    }
    if (!matrices.empty()) {
        for (std::size_t j = 0; j < matrices.size(); ++j) {
            if (!matrices.count(j)) throw ConfigError("scenario: custom fields must be g0, g1, ... without gaps");
            s.custom_matrices.push_back(matrices[j]);
        }
        if (!offsets.empty()) {
            const auto n = s.custom_matrices.front().rows();
            for (std::size_t j = 0; j < s.custom_matrices.size(); ++j) {
                s.custom_offsets.push_back(offsets.count(j) ? offsets[j] : Vec::Zero(n));
            }
            if (offsets.rbegin()->first >= s.custom_matrices.size()) {
                throw ConfigError("scenario: offset without matching matrix");
            }
        }
    }
    if (s.system == SystemKind::custom && s.custom_matrices.empty()) {
        throw ConfigError("scenario: system = custom needs g0 = ... matrices");
    }
    if (!(s.horizon > 0.0) || !(s.step > 0.0) || s.step > s.horizon) {
        throw ConfigError("scenario: need 0 < step <= horizon");
    }
    if (s.cells < 1) throw ConfigError("scenario: cells must be >= 1");
    const auto g = build_system(s);
    if (s.x0.size() != 0 && static_cast<std::size_t>(s.x0.size()) != g.n) {
        throw ConfigError("scenario: x0 has the wrong dimension");
    }
    if ((s.driver == DriverKind::oscillatory || s.driver == DriverKind::oscillatory_limit) && g.inputs() != 2) {
        throw ConfigError("scenario: oscillatory drivers need exactly two input fields");
    }
    if (s.driver == DriverKind::wiener && g.inputs() < 1) {
        throw ConfigError("scenario: wiener driver needs at least one input field");
    }
    return s;
}

Scenario load_scenario(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw ConfigError("cannot open scenario file " + filename);
    return parse_scenario(in);
}

std::string scenario_text(const Scenario& s) {
    std::ostringstream os;
    os << "name = " << s.name << '\n'
       << "system = " << to_string(s.system) << '\n'
       << "driver = " << to_string(s.driver) << '\n'
       << "b1 = " << format_double(s.b1) << '\n'
       << "b2 = " << format_double(s.b2) << '\n'
       << "eta = " << s.eta << '\n'
       << "seed = " << s.seed << '\n'
       << "cells = " << s.cells << '\n'
       << "horizon = " << format_double(s.horizon) << '\n'
       << "step = " << format_double(s.step) << '\n'
       << "x0 = " << join(initial_state(s)) << '\n'
       << "lyapunov = " << (s.lyapunov ? "quadratic" : "none") << '\n'
       << "output = " << s.output << '\n'
       << "grid = dirs=" << s.grid.directions << ",rmin=" << format_double(s.grid.r_min)
       << ",rmax=" << format_double(s.grid.r_max) << ",shells=" << s.grid.shells
       << ",local=" << format_double(s.grid.local_radius) << '\n';
    for (std::size_t j = 0; j < s.custom_matrices.size(); ++j) {
        os << 'g' << j << " = " << matrix_text(s.custom_matrices[j]) << '\n';
    }
    for (std::size_t j = 0; j < s.custom_offsets.size(); ++j) {
        os << 'c' << j << " = " << join(s.custom_offsets[j]) << '\n';
    }
    return os.str();
}

VectorFieldSystem build_system(const Scenario& s) {
    switch (s.system) {
        case SystemKind::motivational_2d: return motivational_system();
        case SystemKind::example_1d: return example_1d_system();
        case SystemKind::custom:
            try {
                return bilinear_system(s.custom_matrices, s.custom_offsets);
            } catch (const Error& e) {
                throw ConfigError(std::string("scenario: ") + e.what());
            }
    }
    throw ConfigError("scenario: unknown system");
}

Vec initial_state(const Scenario& s) {
    if (s.x0.size() != 0) return s.x0;
    const auto g = build_system(s);
    return Vec::Ones(static_cast<Eigen::Index>(g.n));
}

std::string sha256_file(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + filename);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 14];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

void write_manifest(std::ostream& out, const RunManifest& m) {
    out << "version = " << m.version << '\n';
    out << "wall_clock_seconds = " << format_double(m.wall_clock_seconds) << '\n';
    out << "seeds =";
    for (auto seed : m.seeds) out << ' ' << seed;
    out << '\n';
    for (const auto& note : m.notes) out << "note = " << note << '\n';
    for (const auto& f : m.files) out << "file = " << f.file << ' ' << f.sha256 << ' ' << f.bytes << '\n';
    out << "[scenario]\n" << m.scenario;
}

namespace {

class OutputDir {
public:
    explicit OutputDir(const std::string& dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw ConfigError("cannot create output directory " + dir);
    }

    std::ofstream open(const std::string& name) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + (dir_ / name).string());
        names_.push_back(name);
        return out;
    }

    void finish(RunManifest& manifest) const {
        for (const auto& name : names_) {
            const auto path = (dir_ / name).string();
            manifest.files.push_back({name, sha256_file(path), static_cast<std::size_t>(fs::file_size(path))});
        }
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    fs::path dir_;
    std::vector<std::string> names_;
};

Trajectory value_trajectory(const ScalarFunction& v, const Trajectory& traj) {
    Trajectory out;
    out.times = traj.times;
    out.integrator = traj.integrator;
    out.step = traj.step;
    out.seed = traj.seed;
    for (const auto& x : traj.states) out.states.push_back(Vec::Constant(1, v.value(x)));
    return out;
}

void write_plot_script(std::ostream& out, const std::vector<std::pair<std::string, std::size_t>>& series) {
    out << "# gnuplot script\n"
        << "set datafile separator ','\n"
        << "set datafile commentschars '#'\n"
        << "set key autotitle columnhead\n"
        << "set xlabel 't'\n";
    for (const auto& [file, columns] : series) {
        const auto stem = file.substr(0, file.rfind('.'));
        out << "set terminal pngcairo size 800,500\n"
            << "set output '" << stem << ".png'\n"
            << "plot ";
        for (std::size_t c = 2; c <= columns + 1; ++c) {
            if (c > 2) out << ", ";
            out << "'" << file << "' using 1:" << c << " with lines";
        }
        out << "\n";
    }
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Trajectory simulate_driver(const Scenario& s, const VectorFieldSystem& g, const Vec& x0) {
    switch (s.driver) {
        case DriverKind::none: {
            auto traj = ode_simulate(g.drift().eval, x0, s.horizon, s.step);
            traj.integrator = "rk4-drift";
            return traj;
        }
        case DriverKind::oscillatory:
            return finite_eta_simulate(g, OscillatoryNoise{s.b1, s.b2, s.eta}, x0, s.horizon, s.step);
        case DriverKind::oscillatory_limit: {
            auto traj = ode_simulate(limit_drift(g, oscillatory_rate_matrix(s.b1, s.b2)).eval, x0, s.horizon, s.step);
            traj.integrator = "rk4-limit";
            return traj;
        }
        case DriverKind::wiener: {
            const WienerConfig cfg{g.inputs(), s.horizon, s.cells, s.seed};
            auto traj = rough_euler_simulate(g, lift_piecewise_linear(wong_zakai_wiener(cfg)), x0);
            traj.integrator = "rough-euler-wong-zakai";
            traj.seed = s.seed;
            return traj;
        }
    }
    throw ConfigError("scenario: unknown driver");
}

}  // namespace

VectorField scenario_limit_drift(const Scenario& s) {
    const auto g = build_system(s);
    switch (s.driver) {
        case DriverKind::oscillatory:
        case DriverKind::oscillatory_limit: return limit_drift(g, oscillatory_rate_matrix(s.b1, s.b2));
        case DriverKind::none: return g.drift();
        case DriverKind::wiener: break;
    }
    throw ConfigError("scenario: the wiener driver has no deterministic limit drift");
}

RunManifest run_scenario(const Scenario& s) {
    const auto start = std::chrono::steady_clock::now();
    const auto g = build_system(s);
    const Vec x0 = initial_state(s);
    OutputDir dir(s.output);
    RunManifest manifest;
    manifest.scenario = scenario_text(s);
    if (s.driver == DriverKind::wiener) manifest.seeds.push_back(s.seed);

    const auto traj = simulate_driver(s, g, x0);
    {
        auto out = dir.open("trajectory.csv");
        write_trajectory_csv(out, traj);
    }
    std::vector<std::pair<std::string, std::size_t>> series{{"trajectory.csv", g.n}};

    if (s.lyapunov) {
        const auto v = quadratic_lyapunov();
        {
            auto out = dir.open("v_trajectory.csv");
            write_trajectory_csv(out, value_trajectory(v, traj));
        }
        series.emplace_back("v_trajectory.csv", 1);
        if (s.driver == DriverKind::wiener) {
            const auto uasas = check_uasas_condition(v, g, make_radial_grid(g.n, s.grid));
            std::string note = std::string("uasas_condition=") + (uasas.holds ? "holds" : "fails");
            if (uasas.witness) {
                note += " channel=" + std::to_string(uasas.witness->channel) + " at=(" + join(uasas.witness->point) +
                        ") value=" + format_double(uasas.witness->value);
            }
            manifest.notes.push_back(note);
        } else {
            const auto report = check_asir(v, scenario_limit_drift(s), g.n, s.grid);
            auto out = dir.open("report.csv");
            write_report_csv(out, report);
            manifest.notes.push_back(summary_line(report));
        }
    }
    {
        auto out = dir.open("plot.gp");
        write_plot_script(out, series);
    }
    dir.finish(manifest);
    manifest.wall_clock_seconds = elapsed_since(start);
    std::ofstream out(dir.path("manifest.txt"), std::ios::binary);
    write_manifest(out, manifest);
    return manifest;
}

ConvergenceTable convergence_study(const std::vector<unsigned>& etas, const Scenario& s, Execution exec) {
    const auto g = build_system(s);
    if (g.inputs() != 2) throw ConfigError("convergence study: needs a system with two input fields");
    const Vec x0 = initial_state(s);
    const auto limit = ode_simulate(limit_drift(g, oscillatory_rate_matrix(s.b1, s.b2)).eval, x0, s.horizon, s.step);
    const auto gaps = map_indices(
        etas.size(),
        [&](std::size_t i) {
            const auto traj = finite_eta_simulate(g, OscillatoryNoise{s.b1, s.b2, etas[i]}, x0, s.horizon, s.step);
            if (traj.times.size() != limit.times.size()) {
                throw NumericalFailure("convergence study: sample grids differ");
            }
            double gap = 0.0;
            for (std::size_t k = 0; k < traj.states.size(); ++k) {
                gap = std::max(gap, (traj.states[k] - limit.states[k]).cwiseAbs().maxCoeff());
            }
            return gap;
        },
        exec);
    ConvergenceTable table;
    for (std::size_t i = 0; i < etas.size(); ++i) {
        ConvergenceRow row{etas[i], gaps[i], true};
        if (i > 0) row.ok = gaps[i] < gaps[i - 1];
        table.monotone = table.monotone && row.ok;
        table.rows.push_back(row);
    }
    return table;
}

NoiseComparison compare_noise_types(const Scenario& s, const CompareOptions& opts) {
    if (s.system != SystemKind::example_1d) throw ConfigError("compare: scenario must use system = example-1d");
    const auto g = build_system(s);
    const Vec origin = Vec::Zero(1);
    NoiseComparison out;
    const auto det = map_indices(
        opts.etas.size(),
        [&](std::size_t i) {
            const auto traj = finite_eta_simulate(g, OscillatoryNoise{s.b1, s.b2, opts.etas[i]}, origin,
                                                  opts.deterministic_horizon, s.step);
            double peak = 0.0;
            for (const auto& x : traj.states) peak = std::max(peak, x.norm());
            return peak;
        },
        opts.execution);
    for (std::size_t i = 0; i < opts.etas.size(); ++i) out.deterministic.push_back({opts.etas[i], det[i]});

    for (double h : opts.steps) {
        const EnsembleConfig cfg{opts.base_seed, opts.seeds, opts.execution};
        const auto peaks = max_excursions(g, SdeMode::stratonovich, origin, opts.stochastic_horizon, h, cfg);
        StochasticExcursion row{h, median(peaks), 0};
        for (double p : peaks) row.blowups += std::isinf(p) ? 1 : 0;
        out.stochastic.push_back(row);
    }
    return out;
}

RunManifest generate_figures(const std::string& out_dir, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    OutputDir dir(out_dir);
    RunManifest manifest;
    manifest.seeds.push_back(seed);
    const auto g = motivational_system();
    Vec x0(2);
    x0 << 1.0, 1.0;
    std::vector<std::pair<std::string, std::size_t>> series;

    // Sample path under Wong-Zakai Wiener input, N = 10^4 cells on [0, 1].
    {
        const WienerConfig cfg{2, 1.0, 10000, seed};
        auto traj = rough_euler_simulate(g, lift_piecewise_linear(wong_zakai_wiener(cfg)), x0);
        traj.integrator = "rough-euler-wong-zakai";
        traj.seed = seed;
        auto out = dir.open("fig1_wiener.csv");
        write_trajectory_csv(out, traj);
        series.emplace_back("fig1_wiener.csv", 2);
    }
    // Oscillatory inputs eta = 1, 10, 100 and the limit system.
    for (unsigned eta : {1U, 10U, 100U}) {
        const auto traj = finite_eta_simulate(g, OscillatoryNoise{3.0, 4.0, eta}, x0, 1.0, 1e-3);
        const auto name = "fig2_eta" + std::to_string(eta) + ".csv";
        auto out = dir.open(name);
        write_trajectory_csv(out, traj);
        series.emplace_back(name, 2);
    }
    const auto limit_traj = [&] {
        auto t = ode_simulate(limit_drift(g, oscillatory_rate_matrix(3.0, 4.0)).eval, x0, 1.0, 1e-3);
        t.integrator = "rk4-limit";
        return t;
    }();
    {
        auto out = dir.open("fig2_limit.csv");
        write_trajectory_csv(out, limit_traj);
        series.emplace_back("fig2_limit.csv", 2);
    }
    // V^1 = x^T x along the limit system and along eta = 100.
    {
        const auto v = quadratic_lyapunov();
        auto out = dir.open("fig3_v_limit.csv");
        write_trajectory_csv(out, value_trajectory(v, limit_traj));
        series.emplace_back("fig3_v_limit.csv", 1);
        const auto eta100 = finite_eta_simulate(g, OscillatoryNoise{3.0, 4.0, 100}, x0, 1.0, 1e-3);
        auto out2 = dir.open("fig3_v_eta100.csv");
        write_trajectory_csv(out2, value_trajectory(v, eta100));
        series.emplace_back("fig3_v_eta100.csv", 1);
        const auto report = check_asir(v, limit_drift(g, oscillatory_rate_matrix(3.0, 4.0)), 2, GridSpec{});
        manifest.notes.push_back(summary_line(report));
    }
    {
        auto out = dir.open("plot.gp");
        write_plot_script(out, series);
    }
    dir.finish(manifest);
    manifest.wall_clock_seconds = elapsed_since(start);
    manifest.scenario = "figures seed=" + std::to_string(seed) + "\n";
    std::ofstream out(dir.path("manifest.txt"), std::ios::binary);
    write_manifest(out, manifest);
    return manifest;
}

}  // namespace roughstab
