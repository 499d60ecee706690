#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "roughstab/paths.hpp"
#include "roughstab/tensor_algebra.hpp"
#include "roughstab/types.hpp"

namespace roughstab {

/// Deterministic oscillatory input
///   u[1](t) = b1 (cos(eta^2 t) - 1) / eta,   u[2](t) = b2 sin(eta^2 t) / eta,
/// with channel 0 reserved for time.
struct OscillatoryNoise {
    double b1 = 1.0;
    double b2 = 1.0;
    unsigned eta = 1;

    double frequency() const noexcept { return static_cast<double>(eta) * eta; }
    /// One oscillation period, 2 pi / eta^2.
    double period() const noexcept;
};

/// Uniform-grid Wong-Zakai approximation of an m-channel Wiener process.
struct WienerConfig {
    std::size_t dims = 1;  ///< number of Wiener channels m
    double horizon = 1.0;  ///< T
    std::size_t cells = 1; ///< N (also the approximation index eta)
    std::uint64_t seed = 0;
};

/// Limit level-2 rates Gamma[k][j] = lim U^2_{s,t}[k,j] / (t - s), indexed
/// over (time, channel 1..m).
struct RateMatrix {
    Mat gamma;

    std::size_t channels() const noexcept { return static_cast<std::size_t>(gamma.rows()) - 1; }
};

void validate_noise(const OscillatoryNoise& noise);

/// (t, u[1](t), u[2](t)).
Vec oscillatory_value(const OscillatoryNoise& noise, double t);

/// Time derivative of oscillatory_value (first entry is 1).
Vec oscillatory_derivative(const OscillatoryNoise& noise, double t);

/// Exact level-2 increment over [s, t] from closed-form antiderivatives.
LevelTwoElement oscillatory_lift_exact(const OscillatoryNoise& noise, double s, double t);

/// Per-cell exact lifts on an arbitrary partition.
GridRoughPath oscillatory_grid_lift(const OscillatoryNoise& noise, const std::vector<double>& times);

/// Samples of oscillatory_value on `times`.
SampledPath oscillatory_sampled(const OscillatoryNoise& noise, const std::vector<double>& times);

/// eta -> infinity limit over [s, t]: level1 = (t - s, 0, 0), level2 carries
/// the Levy-area rate b1 b2 / 2 on the (1,2)/(2,1) entries plus the
/// time-time entry (t - s)^2 / 2 so that Chen's relation holds.
LevelTwoElement limit_rough_path_oscillatory(double b1, double b2, double s, double t);

/// Per-cell limit increments on a partition.
GridRoughPath limit_grid_path(double b1, double b2, const std::vector<double>& times);

/// Rate matrix of the oscillatory limit: Gamma[1,2] = b1 b2 / 2 = -Gamma[2,1].
RateMatrix oscillatory_rate_matrix(double b1, double b2);

/// Rate matrix of the Wiener limit: Gamma[j,j] = 1/2 for j >= 1.
RateMatrix wiener_limit_rate_matrix(std::size_t m);

/// Constant-rate rough path: each cell has level1 = (h, 0, ..., 0) and
/// level2 = Gamma h.
GridRoughPath rate_rough_path(const RateMatrix& rates, const std::vector<double>& times);

/// Piecewise-linear interpolation of discrete Wiener samples on the uniform
/// N-cell grid; channel 0 is time. Deterministic given cfg.seed.
SampledPath wong_zakai_wiener(const WienerConfig& cfg);

/// Levy area 1/2 (L2[j,k] - L2[k,j]) of the whole-interval piecewise-linear lift.
double antisymmetric_area(const SampledPath& signal, std::size_t j, std::size_t k);

/// Uniform partition of [t0, t1] into `cells` cells.
std::vector<double> uniform_grid(double t0, double t1, std::size_t cells);

}  // namespace roughstab
