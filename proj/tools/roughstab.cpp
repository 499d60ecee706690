#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "roughstab/dynamics.hpp"
#include "roughstab/errors.hpp"
#include "roughstab/experiments.hpp"
#include "roughstab/lyapunov.hpp"
#include "roughstab/paths.hpp"
#include "roughstab/signals.hpp"

namespace rs = roughstab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBlowUp = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNotMonotone = 4;

struct Common {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> eta;
    std::string out;
    std::string grid;
};

rs::Scenario load(const Common& c) {
    rs::Scenario s;
    if (!c.scenario.empty()) s = rs::load_scenario(c.scenario);
    if (c.seed) s.seed = *c.seed;
    if (c.eta) {
        if (*c.eta < 1) throw rs::ConfigError("--eta must be >= 1");
        s.eta = *c.eta;
    }
    if (!c.out.empty()) s.output = c.out;
    if (!c.grid.empty()) s.grid = rs::parse_grid_spec(c.grid);
    return s;
}

void print_matrix(const std::string& label, const rs::Mat& m) {
    std::cout << label << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::cout << "  ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) std::cout << (j ? " " : "") << rs::format_double(m(i, j));
        std::cout << '\n';
    }
}

void print_element(const rs::LevelTwoElement& e) {
    std::cout << "level0 " << rs::format_double(e.level0) << '\n' << "level1";
    for (Eigen::Index i = 0; i < e.level1.size(); ++i) std::cout << ' ' << rs::format_double(e.level1[i]);
    std::cout << '\n';
    print_matrix("level2", e.level2);
}

int cmd_simulate(const Common& c) {
    const auto s = load(c);
    const auto manifest = rs::run_scenario(s);
    for (const auto& note : manifest.notes) std::cout << note << '\n';
    for (const auto& f : manifest.files) std::cout << f.file << ' ' << f.sha256 << '\n';
    return kExitOk;
}

struct LiftArgs {
    std::string input;
    double b1 = 3.0, b2 = 4.0, s = 0.0, t = 1.0, p = 2.5;
};

int cmd_lift(const Common& c, const LiftArgs& a) {
    if (!a.input.empty()) {
        const auto path = rs::read_path_csv_file(a.input);
        const auto lift = rs::lift_piecewise_linear(path);
        const auto whole = rs::increment(lift, 0, lift.cells());
        std::cout << "cells " << lift.cells() << '\n';
        print_element(whole);
        print_matrix("levy_area", whole.antisymmetric_part());
        std::cout << "p_variation(p=" << rs::format_double(a.p) << ") "
                  << rs::format_double(rs::p_variation(path, a.p)) << '\n';
        return kExitOk;
    }
    const unsigned eta = c.eta.value_or(100);
    const rs::OscillatoryNoise noise{a.b1, a.b2, eta};
    std::cout << "oscillatory eta=" << eta << " on [" << rs::format_double(a.s) << ", " << rs::format_double(a.t)
              << "]\n";
    print_element(rs::oscillatory_lift_exact(noise, a.s, a.t));
    std::cout << "limit\n";
    print_element(rs::limit_rough_path_oscillatory(a.b1, a.b2, a.s, a.t));
    return kExitOk;
}

int cmd_limit(const Common& c) {
    const auto s = load(c);
    const auto g = rs::build_system(s);
    const rs::Vec origin = rs::Vec::Zero(static_cast<Eigen::Index>(g.n));
    if (s.driver == rs::DriverKind::wiener) {
        print_matrix("rate_matrix", rs::wiener_limit_rate_matrix(g.inputs()).gamma);
        print_matrix("ito_drift_jacobian_at_origin", rs::jacobian_fd(rs::stratonovich_to_ito_drift(g).eval, origin));
        return kExitOk;
    }
    if (g.inputs() == 2) print_matrix("rate_matrix", rs::oscillatory_rate_matrix(s.b1, s.b2).gamma);
    const auto drift = rs::scenario_limit_drift(s);
    print_matrix("limit_drift_jacobian_at_origin", rs::jacobian_fd(drift.eval, origin));
    if (g.inputs() >= 1) {
        print_matrix("ito_drift_jacobian_at_origin", rs::jacobian_fd(rs::stratonovich_to_ito_drift(g).eval, origin));
    }
    if (!c.out.empty()) {
        std::filesystem::create_directories(s.output);
        auto traj = rs::ode_simulate(drift.eval, rs::initial_state(s), s.horizon, s.step);
        traj.integrator = "rk4-limit";
        std::ofstream out(std::filesystem::path(s.output) / "limit_trajectory.csv", std::ios::binary);
        rs::write_trajectory_csv(out, traj);
    }
    return kExitOk;
}

int cmd_lyapunov(const Common& c) {
    const auto s = load(c);
    const auto g = rs::build_system(s);
    const auto v = rs::quadratic_lyapunov();
    const auto grid = rs::make_radial_grid(g.n, s.grid);
    if (g.inputs() >= 1) {
        const auto uasas = rs::check_uasas_condition(v, g, grid);
        std::cout << "uasas_condition=" << (uasas.holds ? "holds" : "fails");
        if (uasas.witness) {
            std::cout << " channel=" << uasas.witness->channel << " value=" << rs::format_double(uasas.witness->value);
        }
        std::cout << '\n';
    }
    if (s.driver == rs::DriverKind::wiener) {
        const rs::Vec x0 = rs::initial_state(s);
        std::cout << "stochastic_generator(x0)=" << rs::format_double(rs::stochastic_generator(v, g, x0)) << '\n';
        return kExitOk;
    }
    const auto report = rs::check_asir(v, rs::scenario_limit_drift(s), g.n, s.grid);
    if (!c.out.empty()) {
        std::filesystem::create_directories(s.output);
        std::ofstream out(std::filesystem::path(s.output) / "report.csv", std::ios::binary);
        rs::write_report_csv(out, report);
    }
    std::cout << rs::summary_line(report) << '\n';
    return kExitOk;
}

int cmd_figures(const Common& c) {
    const auto manifest = rs::generate_figures(c.out.empty() ? "figures" : c.out, c.seed.value_or(1));
    for (const auto& note : manifest.notes) std::cout << note << '\n';
    for (const auto& f : manifest.files) std::cout << f.file << ' ' << f.sha256 << '\n';
    return kExitOk;
}

int cmd_converge(const Common& c, const std::vector<unsigned>& etas) {
    const auto s = load(c);
    const auto table = rs::convergence_study(etas, s);
    std::cout << "eta,gap,ok\n";
    for (const auto& row : table.rows) {
        std::cout << row.eta << ',' << rs::format_double(row.gap) << ',' << (row.ok ? 1 : 0) << '\n';
    }
    if (table.rows.size() > 1 && !table.monotone) {
        std::cerr << "convergence gaps are not strictly decreasing\n";
        return kExitNotMonotone;
    }
    return kExitOk;
}

int cmd_compare(const Common& c, std::size_t seeds) {
    auto s = load(c);
    if (c.scenario.empty()) s.system = rs::SystemKind::example_1d, s.b1 = 1.0, s.b2 = 1.0;
    rs::CompareOptions opts;
    opts.seeds = seeds;
    opts.base_seed = c.seed.value_or(1);
    const auto cmp = rs::compare_noise_types(s, opts);
    std::cout << "kind,parameter,max_excursion,blowups\n";
    for (const auto& d : cmp.deterministic) {
        std::cout << "deterministic,eta=" << d.eta << ',' << rs::format_double(d.max_excursion) << ",0\n";
    }
    for (const auto& st : cmp.stochastic) {
        std::cout << "stochastic-median,h=" << rs::format_double(st.step) << ','
                  << rs::format_double(st.median_max_excursion) << ',' << st.blowups << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Level-2 rough systems: simulation, limit systems and stability in roughness"};
    app.set_version_flag("--version", std::string(rs::kVersion));
    app.require_subcommand(1);
    Common common;
    LiftArgs lift_args;
    std::vector<unsigned> etas{1, 10, 100};
    std::size_t seeds = 100;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", common.scenario, "scenario file (key = value)");
        sub->add_option("--seed", common.seed, "random seed (u64)");
        sub->add_option("--eta", common.eta, "oscillation index eta (u32)");
        sub->add_option("--out", common.out, "output directory");
        sub->add_option("--grid", common.grid, "grid spec dirs=,rmin=,rmax=,shells=,local=");
    };

    auto* simulate = app.add_subcommand("simulate", "run a scenario and write CSV outputs");
    add_common(simulate);
    auto* lift = app.add_subcommand("lift", "level-2 lift of a CSV path or of the oscillatory input");
    add_common(lift);
    lift->add_option("--input", lift_args.input, "CSV path t,x1,...,xn");
    lift->add_option("--b1", lift_args.b1);
    lift->add_option("--b2", lift_args.b2);
    lift->add_option("--from", lift_args.s, "interval start s");
    lift->add_option("--to", lift_args.t, "interval end t");
    lift->add_option("--p", lift_args.p, "p for the p-variation of --input");
    auto* limit = app.add_subcommand("limit", "limit drift and Ito drift of a scenario");
    add_common(limit);
    auto* lyap = app.add_subcommand("lyapunov", "grid certification with v = x^T x");
    add_common(lyap);
    auto* figures = app.add_subcommand("figures", "CSV data for the three figures");
    add_common(figures);
    auto* converge = app.add_subcommand("converge", "finite-eta versus limit convergence table");
    add_common(converge);
    converge->add_option("--etas", etas, "eta values")->delimiter(',');
    auto* compare = app.add_subcommand("compare", "deterministic versus Wiener excursions of the scalar example");
    add_common(compare);
    compare->add_option("--seeds", seeds, "Monte Carlo paths per step size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*simulate) return cmd_simulate(common);
        if (*lift) return cmd_lift(common, lift_args);
        if (*limit) return cmd_limit(common);
        if (*lyap) return cmd_lyapunov(common);
        if (*figures) return cmd_figures(common);
        if (*converge) return cmd_converge(common, etas);
        if (*compare) return cmd_compare(common, seeds);
    } catch (const rs::BlowUp& e) {
        std::cerr << "blow-up: " << e.what() << '\n';
        return kExitBlowUp;
    } catch (const rs::ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitConfig;
    } catch (const rs::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
