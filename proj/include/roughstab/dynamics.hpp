#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "roughstab/paths.hpp"
#include "roughstab/signals.hpp"
#include "roughstab/types.hpp"

namespace roughstab {

using FieldFn = std::function<Vec(const Vec&)>;
using JacobianFn = std::function<Mat(const Vec&)>;
using TimeFieldFn = std::function<Vec(double, const Vec&)>;

/// Central-difference Jacobian with step scale * max(1, |x|).
Mat jacobian_fd(const FieldFn& field, const Vec& x, double scale = 1e-6);

/// A smooth map R^n -> R^n, optionally with an analytic Jacobian.
struct VectorField {
    FieldFn eval;
    JacobianFn jacobian;  ///< empty: finite differences

    Vec operator()(const Vec& x) const { return eval(x); }
    Mat jacobian_at(const Vec& x) const { return jacobian ? jacobian(x) : jacobian_fd(eval, x); }
};

/// g = (g_0, g_1, ..., g_m); g_0 multiplies dt, g_j the input channel j.
struct VectorFieldSystem {
    std::size_t n = 0;
    std::vector<VectorField> fields;

    std::size_t inputs() const noexcept { return fields.empty() ? 0 : fields.size() - 1; }
    const VectorField& drift() const { return fields.front(); }
};

void validate_system(const VectorFieldSystem& g);

/// Bilinear system g_j(x) = A_j x + c_j with analytic Jacobians A_j.
VectorFieldSystem bilinear_system(const std::vector<Mat>& matrices, const std::vector<Vec>& offsets = {});

/// f = diag(-7, 1) x, g_1 = [[0,0],[1,0]] x, g_2 = [[0,1],[-4,0]] x.
VectorFieldSystem motivational_system();

/// Scalar example g = (0, 1, -x^2).
VectorFieldSystem example_1d_system();

/// Sampled solution with integrator metadata.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::string integrator;
    double step = 0.0;
    std::optional<std::uint64_t> seed;

    SampledPath as_path() const { return {times, states}; }
    const Vec& final_state() const { return states.back(); }
};

/// Comment lines `integrator=`, `h=`, `seed=` followed by `t,x1,...,xn` rows.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

struct SimulationOptions {
    double box = 1e6;               ///< abort once |x| exceeds this radius
    std::size_t record_every = 1;   ///< keep every k-th step (the endpoint is always kept)
};

/// Throws NumericalFailure on NaN and BlowUp when |x| > box.
void check_state(const Vec& x, double t, double box);

/// Level-2 rough Euler scheme, left-point evaluation:
///   x += sum_j g_j(x) dU1[j] + sum_{j,k} Dg_j(x) g_k(x) dU2[k,j].
Trajectory rough_euler_simulate(const VectorFieldSystem& g, const GridRoughPath& driver, const Vec& x0,
                                const SimulationOptions& opts = {});

/// x -> g_0(x) + sum_{j,k} Dg_j(x) g_k(x) Gamma[k,j].
VectorField limit_drift(const VectorFieldSystem& g, const RateMatrix& rates);

/// Ito drift of a Stratonovich system: g_0 + 1/2 sum_{j>=1} Dg_j g_j.
VectorField stratonovich_to_ito_drift(const VectorFieldSystem& g);

/// Classical 4th-order Runge-Kutta with fixed step h (last step shortened to hit T).
Trajectory ode_simulate(const TimeFieldFn& drift, const Vec& x0, double horizon, double h,
                        const SimulationOptions& opts = {});
Trajectory ode_simulate(const FieldFn& drift, const Vec& x0, double horizon, double h,
                        const SimulationOptions& opts = {});

/// max-norm difference between the RK4 endpoints at h and h/2.
double ode_step_halving_error(const FieldFn& drift, const Vec& x0, double horizon, double h);

/// x -> sum_j g_j(x) du[j](t) for an input with known derivative.
TimeFieldFn driven_field(const VectorFieldSystem& g, std::function<Vec(double)> input_derivative);

/// Step used to resolve eta^2 oscillations: base / ceil(base / (period / 50)).
double resolved_step(const OscillatoryNoise& noise, double base_step);

/// Classical solve of x' = g(x) du/dt for the oscillatory input, sampled on
/// the base-step grid.
Trajectory finite_eta_simulate(const VectorFieldSystem& g, const OscillatoryNoise& noise, const Vec& x0,
                               double horizon, double base_step, const SimulationOptions& opts = {});

enum class SdeMode { ito, stratonovich };

/// ito: Euler-Maruyama on dx = g_0 dt + sum g_j dw[j];
/// stratonovich: stochastic Heun on dx = g_0 dt + sum g_j o dw[j].
Trajectory sde_simulate(const VectorFieldSystem& g, SdeMode mode, const Vec& x0, double horizon, double h,
                        std::uint64_t seed, const SimulationOptions& opts = {});

}  // namespace roughstab
