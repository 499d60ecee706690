#include "roughstab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roughstab/errors.hpp"
#include "roughstab/random.hpp"

namespace roughstab {

MeanEstimate estimate_mean(const std::vector<double>& samples) {
    MeanEstimate est;
    est.samples = samples.size();
    if (samples.empty()) return est;
    double sum = 0.0;
    for (double s : samples) sum += s;
    est.mean = sum / static_cast<double>(samples.size());
    if (samples.size() > 1) est.std_error = std::sqrt(sample_variance(samples) / static_cast<double>(samples.size()));
    return est;
}

double sample_variance(const std::vector<double>& samples) {
    if (samples.size() < 2) return 0.0;
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    return ss / static_cast<double>(samples.size() - 1);
}

std::vector<std::optional<Vec>> sde_endpoints(const VectorFieldSystem& g, SdeMode mode, const Vec& x0,
                                              double horizon, double h, const EnsembleConfig& cfg,
                                              const SimulationOptions& opts) {
    SimulationOptions inner = opts;
    inner.record_every = std::numeric_limits<std::size_t>::max();
    return map_indices(
        cfg.paths,
        [&](std::size_t i) -> std::optional<Vec> {
            try {
                return sde_simulate(g, mode, x0, horizon, h, derive_seed(cfg.base_seed, i), inner).final_state();
            } catch (const BlowUp&) {
                return std::nullopt;
            } catch (const NumericalFailure&) {
                return std::nullopt;
            }
        },
        cfg.execution);
}

EndpointSummary summarize_endpoints(const std::vector<std::optional<Vec>>& endpoints) {
    EndpointSummary out;
    Eigen::Index n = 0;
    for (const auto& e : endpoints) {
        if (e) n = e->size();
        else ++out.blowups;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<double> column;
        column.reserve(endpoints.size());
        for (const auto& e : endpoints) {
            if (e) column.push_back((*e)[i]);
        }
        out.components.push_back(estimate_mean(column));
    }
    return out;
}

MeanEstimate generator_estimate(const ScalarFunction& v, const VectorFieldSystem& g, const Vec& x,
                                double delta, const EnsembleConfig& cfg) {
    if (!(delta > 0.0)) throw InvalidParameter("generator estimate: delta must be positive");
    const double v0 = v.value(x);
    SimulationOptions opts;
    opts.record_every = std::numeric_limits<std::size_t>::max();
    const auto samples = map_indices(
        cfg.paths,
        [&](std::size_t i) {
            const Vec xd = sde_simulate(g, SdeMode::stratonovich, x, delta, delta,
                                        derive_seed(cfg.base_seed, i), opts)
                               .final_state();
            return (v.value(xd) - v0) / delta;
        },
        cfg.execution);
    return estimate_mean(samples);
}

std::vector<double> max_excursions(const VectorFieldSystem& g, SdeMode mode, const Vec& x0, double horizon,
                                   double h, const EnsembleConfig& cfg, const SimulationOptions& opts) {
    SimulationOptions inner = opts;
    inner.record_every = 1;
    return map_indices(
        cfg.paths,
        [&](std::size_t i) {
            try {
                const auto traj = sde_simulate(g, mode, x0, horizon, h, derive_seed(cfg.base_seed, i), inner);
                double peak = 0.0;
                for (const auto& s : traj.states) peak = std::max(peak, s.norm());
                return peak;
            } catch (const BlowUp&) {
                return std::numeric_limits<double>::infinity();
            } catch (const NumericalFailure&) {
                return std::numeric_limits<double>::infinity();
            }
        },
        cfg.execution);
}

double median(std::vector<double> values) {
    if (values.empty()) throw InvalidParameter("median of an empty sample");
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

}  // namespace roughstab
