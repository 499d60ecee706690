#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "roughstab/errors.hpp"
#include "roughstab/experiments.hpp"

using namespace roughstab;
namespace fs = std::filesystem;

namespace {

Scenario parse(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("roughstab_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("scenario parsing") {
    const auto s = parse(
        "# figure 2 run\n"
        "name = fig2\n"
        "system = motivational-2d\n"
        "driver = oscillatory   # finite eta\n"
        "b1 = 3\nb2 = 4\neta = 10\n"
        "horizon = 0.5\nstep = 1e-3\n"
        "x0 = 1, 2\n"
        "lyapunov = quadratic\n"
        "grid = dirs=8,shells=5\n");
    CHECK(s.name == "fig2");
    CHECK(s.driver == DriverKind::oscillatory);
    CHECK(s.eta == 10);
    CHECK(s.horizon == 0.5);
    CHECK(s.x0 == (Vec(2) << 1, 2).finished());
    CHECK(s.lyapunov);
    CHECK(s.grid.directions == 8);
    CHECK(s.grid.shells == 5);

    const auto back = parse(scenario_text(s));
    CHECK(back.name == s.name);
    CHECK(back.eta == s.eta);
    CHECK(back.x0 == s.x0);
    CHECK(back.grid.directions == 8);

    const auto custom = parse("system = custom\ng0 = -1, 0; 0, -2\ng1 = 0, 1; -1, 0\nc1 = 0.5, 0\n");
    const auto g = build_system(custom);
    CHECK(g.n == 2);
    CHECK(g.inputs() == 1);
    CHECK(g.fields[1](Vec::Zero(2)) == (Vec(2) << 0.5, 0).finished());
    CHECK(initial_state(custom) == Vec::Ones(2));
}

TEST_CASE("scenario errors") {
    CHECK_THROWS_AS(parse("colour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse("eta = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("eta = ten\n"), ConfigError);
    CHECK_THROWS_AS(parse("horizon = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse("system = moon\n"), ConfigError);
    CHECK_THROWS_AS(parse("just a line\n"), ConfigError);
    CHECK_THROWS_AS(parse("x0 = 1, 2, 3\n"), ConfigError);
    CHECK_THROWS_AS(parse("system = custom\n"), ConfigError);
    CHECK_THROWS_AS(parse("system = custom\ng0 = -1\ndriver = wiener\n"), ConfigError);
    CHECK_THROWS_AS(parse("system = custom\ng0 = -1\ng1 = 1\ndriver = oscillatory\n"), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.txt"), ConfigError);
}

TEST_CASE("run_scenario outputs are reproducible and round-trip") {
    const auto dir = scratch("limit");
    auto s = parse("name = fig3\ndriver = oscillatory-limit\nlyapunov = quadratic\nhorizon = 1\n"
                   "grid = dirs=8,shells=6\n");
    s.output = dir.string();
    const auto first = run_scenario(s);
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "v_trajectory.csv"));
    CHECK(fs::exists(dir / "report.csv"));
    CHECK(fs::exists(dir / "plot.gp"));
    CHECK(fs::exists(dir / "manifest.txt"));
    CHECK(first.files.size() >= 3);

    const auto traj = read_path_csv_file((dir / "trajectory.csv").string());
    CHECK(traj.dim() == 2);
    CHECK(traj.times.back() == doctest::Approx(1.0));
    CHECK(std::abs(traj.values.back()[0] - std::exp(-1.0)) <= 1e-6);
    CHECK(std::abs(traj.values.back()[1] - std::exp(-5.0)) <= 1e-6);

    const auto vt = read_path_csv_file((dir / "v_trajectory.csv").string());
    for (std::size_t k = 1; k < vt.size(); ++k) CHECK(vt.values[k][0] < vt.values[k - 1][0]);
    CHECK(slurp(dir / "report.csv").find("# verdict=globally-ASiR") != std::string::npos);

    const auto second = run_scenario(s);
    REQUIRE(first.files.size() == second.files.size());
    for (std::size_t i = 0; i < first.files.size(); ++i) {
        CHECK(first.files[i].file == second.files[i].file);
        CHECK(first.files[i].sha256 == second.files[i].sha256);
        CHECK(first.files[i].sha256 == sha256_file((dir / first.files[i].file).string()));
    }
    const std::string manifest = slurp(dir / "manifest.txt");
    CHECK(manifest.find("version = 0.1.0") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("wiener scenario records its seed") {
    const auto dir = scratch("wiener");
    auto s = parse("driver = wiener\nseed = 9\ncells = 2000\nlyapunov = quadratic\n");
    s.output = dir.string();
    const auto manifest = run_scenario(s);
    CHECK(manifest.seeds == std::vector<std::uint64_t>{9});
    const std::string text = slurp(dir / "trajectory.csv");
    CHECK(text.find("# seed=9") != std::string::npos);
    const auto traj = read_path_csv_file((dir / "trajectory.csv").string());
    CHECK(traj.size() == 2001);
    CHECK(slurp(dir / "manifest.txt").find("uasas") != std::string::npos);

    auto other = s;
    other.output = (dir / "again").string();
    run_scenario(other);
    CHECK(sha256_file((dir / "trajectory.csv").string()) == sha256_file((dir / "again" / "trajectory.csv").string()));
    fs::remove_all(dir);
}

TEST_CASE("sha256 digest") {
    const auto dir = scratch("sha");
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "abc.txt", std::ios::binary);
        out << "abc";
    }
    CHECK(sha256_file((dir / "abc.txt").string()) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    fs::remove_all(dir);
}

TEST_CASE("convergence study") {
    Scenario s;
    s.system = SystemKind::example_1d;
    s.b1 = 1.0;
    s.b2 = 1.0;
    s.x0 = Vec::Constant(1, 1.0);
    s.horizon = 1.0;
    const auto table = convergence_study({10, 100}, s);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.monotone);
    CHECK(table.rows[1].gap <= 0.05);

    const auto single = convergence_study({10}, s);
    CHECK(single.rows.size() == 1);
    CHECK(single.monotone);
}

TEST_CASE("noise comparison on the scalar example") {
    Scenario s;
    s.system = SystemKind::example_1d;
    s.b1 = 1.0;
    s.b2 = 1.0;
    CompareOptions opts;
    opts.steps = {1e-2, 1e-3};
    opts.seeds = 40;
    const auto cmp = compare_noise_types(s, opts);
    REQUIRE(cmp.deterministic.size() == 2);
    CHECK(cmp.deterministic[0].max_excursion > cmp.deterministic[1].max_excursion);
    CHECK(cmp.deterministic[1].max_excursion <= 0.1);
    for (const auto& row : cmp.stochastic) CHECK(row.median_max_excursion > 0.5);

    Scenario wrong;
    CHECK_THROWS_AS(compare_noise_types(wrong, opts), ConfigError);
}

TEST_CASE("figure data") {
    const auto dir = scratch("figures");
    const auto manifest = generate_figures(dir.string(), 1);
    for (const char* f : {"fig1_wiener.csv", "fig2_eta1.csv", "fig2_eta10.csv", "fig2_eta100.csv", "fig2_limit.csv",
                          "fig3_v_limit.csv", "fig3_v_eta100.csv", "plot.gp", "manifest.txt"}) {
        CHECK(fs::exists(dir / f));
    }
    for (const auto& entry : manifest.files) {
        if (entry.file.size() > 4 && entry.file.substr(entry.file.size() - 4) == ".csv") {
            CHECK_NOTHROW(read_path_csv_file((dir / entry.file).string()));
        }
    }
    fs::remove_all(dir);
}
