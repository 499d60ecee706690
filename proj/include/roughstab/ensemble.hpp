#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "roughstab/dynamics.hpp"
#include "roughstab/lyapunov.hpp"
#include "roughstab/parallel.hpp"
#include "roughstab/types.hpp"

namespace roughstab {

/// Sample mean with its standard error.
struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

MeanEstimate estimate_mean(const std::vector<double>& samples);

/// Unbiased sample variance.
double sample_variance(const std::vector<double>& samples);

/// Path i uses seed derive_seed(base_seed, i).
struct EnsembleConfig {
    std::uint64_t base_seed = 0;
    std::size_t paths = 1;
    Execution execution = Execution::parallel;
};

/// Per-path SDE endpoints; nullopt marks paths that blew up.
std::vector<std::optional<Vec>> sde_endpoints(const VectorFieldSystem& g, SdeMode mode, const Vec& x0,
                                              double horizon, double h, const EnsembleConfig& cfg,
                                              const SimulationOptions& opts = {});

/// Componentwise mean estimates over the finite endpoints.
struct EndpointSummary {
    std::vector<MeanEstimate> components;
    std::size_t blowups = 0;
};

EndpointSummary summarize_endpoints(const std::vector<std::optional<Vec>>& endpoints);

/// Monte Carlo estimate of the generator: mean of [v(x_delta) - v(x)] / delta
/// over single Heun-Stratonovich steps of length delta from x.
MeanEstimate generator_estimate(const ScalarFunction& v, const VectorFieldSystem& g, const Vec& x,
                                double delta, const EnsembleConfig& cfg);

/// max_t |x_t| per path; +infinity for paths that blew up.
std::vector<double> max_excursions(const VectorFieldSystem& g, SdeMode mode, const Vec& x0, double horizon,
                                   double h, const EnsembleConfig& cfg, const SimulationOptions& opts = {});

double median(std::vector<double> values);

}  // namespace roughstab
