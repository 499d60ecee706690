// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "roughstab/ensemble.hpp"
#include "roughstab/experiments.hpp"
#include "roughstab/random.hpp"

using namespace roughstab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// Matrix of a drift assumed linear, read off from basis vectors, plus the
// worst linearity residual on a few extra points.
std::pair<Mat, double> linear_part(const VectorField& drift, std::size_t n) {
    Mat a(n, n);
    for (std::size_t j = 0; j < n; ++j) a.col(j) = drift(Vec::Unit(n, j));
    double residual = 0.0;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 20; ++k) {
        const Vec x = Vec::NullaryExpr(n, [&] { return 3.0 * gauss(rng); });
        residual = std::max(residual, (drift(x) - a * x).cwiseAbs().maxCoeff());
    }
    return {a, residual};
}

Outcome levy_area_rate() {
    Outcome o;
    const auto lift = oscillatory_lift_exact(OscillatoryNoise{3.0, 4.0, 100}, 0.0, 1.0);
    o.require(std::abs(lift.level2(1, 2) - 6.0) <= 0.01, "finite [1,2]=" + num(lift.level2(1, 2)));
    o.require(std::abs(lift.level2(2, 1) + 6.0) <= 0.01, "finite [2,1]=" + num(lift.level2(2, 1)));
    const auto lim = limit_rough_path_oscillatory(3.0, 4.0, 0.0, 1.0);
    o.require(lim.level2(1, 2) == 6.0 && lim.level2(2, 1) == -6.0,
              "limit [1,2]=" + num(lim.level2(1, 2)) + " [2,1]=" + num(lim.level2(2, 1)));
    return o;
}

Outcome motivational_limit() {
    Outcome o;
    const auto g = motivational_system();
    const auto drift = limit_drift(g, oscillatory_rate_matrix(3.0, 4.0));
    const auto [a, residual] = linear_part(drift, 2);
    const Mat target = (Mat(2, 2) << -1, 0, 0, -5).finished();
    o.require(max_abs(a - target) <= 1e-10 && residual <= 1e-10,
              "matrix error " + num(max_abs(a - target)) + ", linearity residual " + num(residual));
    const auto report = check_asir(quadratic_lyapunov(), drift, 2, GridSpec{});
    o.require(report.verdict == Verdict::globally_asir && std::abs(report.tested_radius - 10.0) < 1e-9,
              "b1b2=12 " + to_string(report.verdict) + " radius " + num(report.tested_radius));
    for (double b1b2 : {2.0, 14.0}) {
        const auto r = check_asir(quadratic_lyapunov(), limit_drift(g, oscillatory_rate_matrix(b1b2, 1.0)), 2,
                                  GridSpec{});
        o.require(r.verdict == Verdict::stable_in_roughness || r.verdict == Verdict::not_certified,
                  "b1b2=" + num(b1b2) + " " + to_string(r.verdict));
    }
    return o;
}

Outcome scalar_example() {
    Outcome o;
    const auto g = example_1d_system();
    const auto drift = limit_drift(g, oscillatory_rate_matrix(1.0, 1.0));
    const auto [a, residual] = linear_part(drift, 1);
    o.require(std::abs(a(0, 0) + 1.0) <= 1e-10 && residual <= 1e-10, "limit drift slope " + num(a(0, 0)));

    const auto rough = rough_euler_simulate(g, limit_grid_path(1.0, 1.0, uniform_grid(0.0, 5.0, 50000)),
                                            Vec::Constant(1, 1.0));
    double rough_err = 0.0;
    for (std::size_t k = 0; k < rough.times.size(); ++k)
        rough_err = std::max(rough_err, std::abs(rough.states[k][0] - std::exp(-rough.times[k])));
    o.require(rough_err <= 1e-3, "rough euler sup error " + num(rough_err));

    const auto finite = finite_eta_simulate(g, OscillatoryNoise{1.0, 1.0, 100}, Vec::Constant(1, 1.0), 5.0, 1e-3);
    double finite_err = 0.0;
    for (std::size_t k = 0; k < finite.times.size(); ++k)
        finite_err = std::max(finite_err, std::abs(finite.states[k][0] - std::exp(-finite.times[k])));
    o.require(finite_err <= 0.05, "finite-eta sup error " + num(finite_err));
    return o;
}

Outcome convergence() {
    Outcome o;
    Scenario s;
    s.x0 = v2(1, 1);
    s.horizon = 1.0;
    const auto table = convergence_study({1, 10, 100}, s);
    std::string gaps;
    for (const auto& row : table.rows) gaps += (gaps.empty() ? "" : " / ") + num(row.gap);
    o.require(table.monotone, "gaps " + gaps + " strictly decreasing");
    o.require(table.rows.back().gap <= 0.1, "gap(eta=100) " + num(table.rows.back().gap) + " <= 0.1");
    return o;
}

Outcome ito_equivalence() {
    Outcome o;
    const auto g = motivational_system();
    const auto ito = stratonovich_to_ito_drift(g);
    const auto [a, residual] = linear_part(ito, 2);
    const Mat target = (Mat(2, 2) << -9, 0, 0, -1).finished();
    o.require(a == target && residual <= 1e-14 * 10.0,
              "ito drift matrix error " + num(max_abs(a - target)) + ", rounding residual " + num(residual));

    const std::size_t paths = 10000;
    const auto heun = summarize_endpoints(
        sde_endpoints(g, SdeMode::stratonovich, v2(1, 1), 1.0, 1e-3, {derive_seed(501, 0), paths}));
    auto corrected = g;
    corrected.fields[0] = ito;
    const auto em = summarize_endpoints(
        sde_endpoints(corrected, SdeMode::ito, v2(1, 1), 1.0, 1e-3, {derive_seed(501, 1), paths}));
    o.require(heun.blowups == 0 && em.blowups == 0, "blow-ups " + std::to_string(heun.blowups + em.blowups));
    for (std::size_t i = 0; i < 2; ++i) {
        const double diff = heun.components[i].mean - em.components[i].mean;
        const double se = std::hypot(heun.components[i].std_error, em.components[i].std_error);
        o.require(std::abs(diff) <= 3.0 * se, "x" + std::to_string(i + 1) + ": heun " + num(heun.components[i].mean) +
                                                  " vs em " + num(em.components[i].mean) + " (" +
                                                  num(std::abs(diff) / se) + " SE)");
    }
    return o;
}

Outcome generator_oracle() {
    Outcome o;
    const auto g = motivational_system();
    const auto v = quadratic_lyapunov();
    const Vec x = v2(1, 1);
    const double implemented = stochastic_generator(v, g, x);
    o.require(std::abs(implemented + 2.0) <= 1e-12, "implemented " + num(implemented));
    const auto est = generator_estimate(v, g, x, 1e-3, {derive_seed(601, 0), 10000});
    o.require(std::abs(est.mean - implemented) <= 3.0 * est.std_error,
              "monte carlo " + num(est.mean) + " +- " + num(est.std_error) + " (" +
                  num(std::abs(est.mean - implemented) / est.std_error) + " SE)");
    return o;
}

Outcome uasas_contrast() {
    Outcome o;
    const auto g = motivational_system();
    const auto v = quadratic_lyapunov();
    const auto grid = make_radial_grid(2, GridSpec{});
    const auto res = check_uasas_condition(v, g, grid);
    o.require(!res.holds, std::string("uasas holds=") + (res.holds ? "true" : "false"));
    if (res.witness) {
        const Vec& p = res.witness->point;
        const double expected = 2.0 * p[0] * p[1];
        o.require(res.witness->channel == 1 && std::abs(res.witness->value - expected) <= 1e-12 * std::max(1.0, std::abs(expected)),
                  "witness g" + std::to_string(res.witness->channel) + " value " + num(res.witness->value) +
                      " vs 2x1x2 " + num(expected));
    } else {
        o.require(false, "no witness");
    }
    const auto report = check_asir(v, limit_drift(g, oscillatory_rate_matrix(3.0, 4.0)), grid);
    o.require(report.verdict == Verdict::globally_asir, "limit system " + to_string(report.verdict));
    return o;
}

Outcome property_suites() {
    Outcome o;
    std::mt19937_64 rng(808);
    std::normal_distribution<double> gauss;

    double chen = 0.0;
    for (std::size_t cells = 1; cells <= 16; ++cells) {
        SampledPath p;
        Vec x = Vec::Zero(3);
        for (std::size_t k = 0; k <= cells; ++k) {
            p.times.push_back(0.1 * k);
            p.values.push_back(x);
            x += Vec::NullaryExpr(3, [&] { return gauss(rng); });
        }
        const auto lift = lift_piecewise_linear(p);
        for (std::size_t i = 0; i <= cells; ++i)
            for (std::size_t k = i; k <= cells; ++k)
                for (std::size_t j = k; j <= cells; ++j)
                    chen = std::max(chen, chen_defect(increment(lift, i, k), increment(lift, k, j), increment(lift, i, j)));
    }
    o.require(chen <= 1e-10, "chen defect " + num(chen));

    std::size_t mismatches = 0;
    for (std::size_t samples = 2; samples <= 13; ++samples) {
        for (int rep = 0; rep < 5; ++rep) {
            SampledPath p;
            Vec x = Vec::Zero(2);
            for (std::size_t k = 0; k < samples; ++k) {
                p.times.push_back(static_cast<double>(k));
                p.values.push_back(x);
                x += Vec::NullaryExpr(2, [&] { return gauss(rng); });
            }
            for (double pw : {1.0, 2.0, 2.5})
                if (p_variation(p, pw) != oracle::p_variation_bruteforce(p, pw)) ++mismatches;
        }
    }
    o.require(mismatches == 0, "p-variation mismatches " + std::to_string(mismatches));

    double assoc = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        auto random_element = [&](Eigen::Index n) {
            return t2_make(1.0, Vec::NullaryExpr(n, [&] { return gauss(rng); }),
                           Mat::NullaryExpr(n, n, [&] { return gauss(rng); }));
        };
        const auto n = static_cast<Eigen::Index>(1 + trial % 4);
        const auto a = random_element(n), b = random_element(n), c = random_element(n);
        assoc = std::max(assoc, t2_max_distance(t2_product(t2_product(a, b), c), t2_product(a, t2_product(b, c))));
    }
    o.require(assoc <= 1e-12, "associativity " + num(assoc));

    double rel = 0.0;
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    auto relative = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); };
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + trial % 3;
        std::vector<oracle::Polynomial> cj, ck;
        for (int i = 0; i < n; ++i) {
            cj.push_back(oracle::random_polynomial(rng, n));
            ck.push_back(oracle::random_polynomial(rng, n));
        }
        const auto v = oracle::analytic_scalar(oracle::random_polynomial(rng, n), n);
        const ScalarFunction v_fd{v.value, {}, {}};
        const auto gj = oracle::analytic_field(cj), gk = oracle::analytic_field(ck);
        const VectorField gj_fd{gj.eval, {}}, gk_fd{gk.eval, {}};
        const Vec x = Vec::NullaryExpr(n, [&] { return coord(rng); });
        const Mat ja = gj.jacobian_at(x);
        rel = std::max(rel, max_abs(ja - jacobian_fd(gj.eval, x)) / std::max(1.0, max_abs(ja)));
        rel = std::max(rel, relative(lie_derivative(v, gj, x), lie_derivative(v_fd, gj_fd, x)));
        rel = std::max(rel, relative(second_lie_derivative(v, gj, gk, x), second_lie_derivative(v_fd, gj_fd, gk_fd, x)));
    }
    o.require(rel <= 1e-5, "finite-difference relative gap " + num(rel));
    return o;
}

Outcome equilibrium_contrast() {
    Outcome o;
    Scenario s;
    s.system = SystemKind::example_1d;
    s.b1 = 1.0;
    s.b2 = 1.0;
    const auto cmp = compare_noise_types(s);
    const auto& det = cmp.deterministic;
    o.require(det.size() == 2 && det[0].max_excursion > det[1].max_excursion,
              "deterministic eta=10 " + num(det[0].max_excursion) + " > eta=100 " + num(det[1].max_excursion));
    o.require(det.back().max_excursion <= 0.1, "eta=100 excursion " + num(det.back().max_excursion) + " <= 0.1");
    for (const auto& row : cmp.stochastic) {
        o.require(row.median_max_excursion > 0.5, "h=" + num(row.step) + " median " + num(row.median_max_excursion) +
                                                      " (" + std::to_string(row.blowups) + " blow-ups)");
    }
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "levy-area rate", 1.0, levy_area_rate},
        {2, "motivational limit system", 5.0, motivational_limit},
        {3, "scalar example", 10.0, scalar_example},
        {4, "finite-eta convergence", 60.0, convergence},
        {5, "stratonovich/ito equivalence", 120.0, ito_equivalence},
        {6, "generator oracle", 120.0, generator_oracle},
        {7, "uasas contrast", 5.0, uasas_contrast},
        {8, "property suites", 30.0, property_suites},
        {9, "equilibrium contrast", 120.0, equilibrium_contrast},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.require(secs < c.budget_seconds, "runtime " + num(secs) + "s < " + num(c.budget_seconds) + "s");
        if (!out.pass) ++failures;
        std::printf("[%s] criterion %d %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
