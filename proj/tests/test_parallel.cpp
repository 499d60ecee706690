#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "roughstab/ensemble.hpp"
#include "roughstab/parallel.hpp"
#include "roughstab/random.hpp"

using namespace roughstab;

TEST_CASE("map_indices keeps index order") {
    auto square = [](std::size_t i) { return static_cast<double>(i * i); };
    const auto a = map_indices(1000, square, Execution::serial);
    const auto b = map_indices(1000, square, Execution::parallel);
    CHECK(a == b);
    CHECK(b[31] == 961.0);
    CHECK(map_indices(0, square, Execution::parallel).empty());
    CHECK(worker_count() >= 1);
}

TEST_CASE("map_indices rethrows the lowest failing index") {
    auto fail = [](std::size_t i) -> int {
        if (i == 7 || i == 300) throw std::runtime_error("index " + std::to_string(i));
        return 0;
    };
    for (auto exec : {Execution::serial, Execution::parallel}) {
        try {
            map_indices(500, fail, exec);
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "index 7");
        }
    }
}

TEST_CASE("ensembles are bitwise identical in both execution modes") {
    const auto g = motivational_system();
    const Vec x0 = Vec::Ones(2);
    EnsembleConfig serial{5, 64, Execution::serial};
    EnsembleConfig parallel{5, 64, Execution::parallel};
    const auto a = sde_endpoints(g, SdeMode::stratonovich, x0, 0.5, 1e-3, serial);
    const auto b = sde_endpoints(g, SdeMode::stratonovich, x0, 0.5, 1e-3, parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].has_value() == b[i].has_value());
        if (a[i]) CHECK(*a[i] == *b[i]);
    }
    // Path i is the single-path run with the derived seed.
    CHECK(*a[3] == sde_simulate(g, SdeMode::stratonovich, x0, 0.5, 1e-3, derive_seed(5, 3)).final_state());

    const auto v = quadratic_lyapunov();
    const auto ga = generator_estimate(v, g, x0, 1e-3, serial);
    const auto gb = generator_estimate(v, g, x0, 1e-3, parallel);
    CHECK(ga.mean == gb.mean);
    CHECK(ga.std_error == gb.std_error);

    const auto ea = max_excursions(example_1d_system(), SdeMode::stratonovich, Vec::Zero(1), 1.0, 1e-3, serial);
    const auto eb = max_excursions(example_1d_system(), SdeMode::stratonovich, Vec::Zero(1), 1.0, 1e-3, parallel);
    CHECK(ea == eb);
}

TEST_CASE("blow-ups are recorded per path") {
    const auto g = example_1d_system();
    SimulationOptions tight;
    tight.box = 0.05;
    const auto ends = sde_endpoints(g, SdeMode::stratonovich, Vec::Zero(1), 1.0, 1e-3, {1, 20}, tight);
    std::size_t missing = 0;
    for (const auto& e : ends) missing += e ? 0 : 1;
    CHECK(missing == 20);
    CHECK(summarize_endpoints(ends).blowups == 20);
    const auto ex = max_excursions(g, SdeMode::stratonovich, Vec::Zero(1), 1.0, 1e-3, {1, 20}, tight);
    for (double e : ex) CHECK(std::isinf(e));
}

TEST_CASE("estimators") {
    const auto est = estimate_mean({1.0, 2.0, 3.0, 4.0});
    CHECK(est.mean == 2.5);
    CHECK(est.samples == 4);
    CHECK(sample_variance({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(5.0 / 3.0));
    CHECK(est.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(median({1.0, std::numeric_limits<double>::infinity(), 2.0}) == 2.0);
}
