#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "roughstab/dynamics.hpp"
#include "roughstab/parallel.hpp"
#include "roughstab/signals.hpp"
#include "roughstab/types.hpp"

namespace roughstab {

/// Lyapunov candidate v: D -> R with optional analytic derivatives.
/// D is the closed ball of radius domain_radius around the origin.
struct ScalarFunction {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;  ///< empty: central differences
    std::function<Mat(const Vec&)> hessian;   ///< empty: nested differences
    double domain_radius = std::numeric_limits<double>::infinity();

    bool contains(const Vec& x) const { return x.norm() <= domain_radius; }
    Vec gradient_at(const Vec& x) const;
};

/// v(x) = scale * x^T x with analytic gradient and Hessian.
ScalarFunction quadratic_lyapunov(double scale = 1.0);

/// (L_g v)(x) = grad v(x) . g(x).
double lie_derivative(const ScalarFunction& v, const VectorField& gj, const Vec& x);

/// (L_{g_k} L_{g_j} v)(x) = grad(L_{g_j} v)(x) . g_k(x). Uses
/// H_v g_j + Dg_j^T grad v when the Hessian and Jacobian are analytic.
double second_lie_derivative(const ScalarFunction& v, const VectorField& gj, const VectorField& gk,
                             const Vec& x);

/// DV^1(x) = grad v(x) . drift(x) for a limit drift from limit_drift().
double dv_along_limit(const ScalarFunction& v, const VectorField& drift, const Vec& x);

/// L_{g_0} v + sum_{j,k} Gamma[k,j] L_{g_k} L_{g_j} v.
double rough_generator(const ScalarFunction& v, const VectorFieldSystem& g, const RateMatrix& rates,
                       const Vec& x);

/// Wiener specialisation: L_{g_0} v + 1/2 sum_{j>=1} L_{g_j} L_{g_j} v.
double stochastic_generator(const ScalarFunction& v, const VectorFieldSystem& g, const Vec& x);

/// Punctured log-radial grid: directions x geometric shells in [r_min, r_max].
struct GridSpec {
    std::size_t directions = 24;
    double r_min = 1e-3;
    double r_max = 10.0;
    std::size_t shells = 40;
    double local_radius = 1.0;
};

/// "dirs=24,rmin=1e-3,rmax=10,shells=40,local=1"; missing keys keep defaults.
GridSpec parse_grid_spec(const std::string& text);

/// n = 1: +-1; n = 2: `directions` equally spaced angles; n >= 3: +-axes and
/// all normalised sign diagonals.
std::vector<Vec> make_radial_grid(std::size_t n, const GridSpec& spec);

struct UasasWitness {
    std::size_t channel = 0;
    Vec point;
    double value = 0.0;
};

struct UasasResult {
    bool holds = true;
    std::optional<UasasWitness> witness;
};

/// True iff |L_{g_j} v| <= 1e-9 at every grid point for j = 1..m; otherwise
/// reports the first violation in grid order.
UasasResult check_uasas_condition(const ScalarFunction& v, const VectorFieldSystem& g,
                                  const std::vector<Vec>& grid, double tol = 1e-9);

enum class Verdict { not_certified, stable_in_roughness, locally_asir, globally_asir };

std::string to_string(Verdict verdict);

struct GridEvaluation {
    Vec point;
    double value = 0.0;  ///< v(x)
    double dv = 0.0;     ///< DV^1(x)
    bool violation = false;
};

/// Outcome of grid certification. Verdicts are tiered: globally-ASiR implies
/// locally-ASiR implies stable-in-roughness.
struct StabilityReport {
    Verdict verdict = Verdict::not_certified;
    std::string reason;
    std::vector<GridEvaluation> grid;
    double worst_value = -std::numeric_limits<double>::infinity();
    std::vector<Vec> violations;
    double margin = 0.0;        ///< min of -DV^1 / |x|^2 over the grid
    double fitted_rate = 0.0;   ///< least-squares c in -DV^1 ~ c |x|^2
    double lower_bound = 0.0;   ///< min v / |x|^2 (W1 = a |x|^2)
    double upper_bound = 0.0;   ///< max v / |x|^2 (W2 = b |x|^2)
    double tested_radius = 0.0;
};

struct AsirOptions {
    double local_radius = 1.0;
    double tol = 1e-9;       ///< sign tolerance for DV^1 <= 0
    double min_rate = 1e-6;  ///< acceptance threshold for fitted quadratic bounds
    double equilibrium_tol = 1e-10;
    Execution execution = Execution::parallel;
};

/// Grid certification of stability in roughness for dx = drift(x) dt.
/// A drift that does not vanish at the origin yields not-certified.
StabilityReport check_asir(const ScalarFunction& v, const VectorField& drift, const std::vector<Vec>& grid,
                           const AsirOptions& opts = {});
StabilityReport check_asir(const ScalarFunction& v, const VectorField& drift, std::size_t n,
                           const GridSpec& spec, Execution exec = Execution::parallel);

/// Columns x1..xn,v,dv,violation.
void write_report_csv(std::ostream& out, const StabilityReport& report);

/// One line: verdict, tested radius, worst DV^1, margin, violation count.
std::string summary_line(const StabilityReport& report);

}  // namespace roughstab
