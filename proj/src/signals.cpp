#include "roughstab/signals.hpp"

#include <cmath>
#include <numbers>

#include "roughstab/errors.hpp"
#include "roughstab/random.hpp"

namespace roughstab {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    mix.next();
    return mix.next();
}

double GaussianStream::next() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = rng_.uniform();
    const double u2 = rng_.uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double OscillatoryNoise::period() const noexcept { return 2.0 * std::numbers::pi / frequency(); }

void validate_noise(const OscillatoryNoise& noise) {
    if (noise.eta < 1) throw InvalidParameter("oscillatory noise: eta must be >= 1");
}

Vec oscillatory_value(const OscillatoryNoise& noise, double t) {
    validate_noise(noise);
    const double eta = noise.eta;
    const double w = noise.frequency();
    Vec u(3);
    u << t, noise.b1 * (std::cos(w * t) - 1.0) / eta, noise.b2 * std::sin(w * t) / eta;
    return u;
}

Vec oscillatory_derivative(const OscillatoryNoise& noise, double t) {
    validate_noise(noise);
    const double eta = noise.eta;
    const double w = noise.frequency();
    Vec du(3);
    du << 1.0, -noise.b1 * eta * std::sin(w * t), noise.b2 * eta * std::cos(w * t);
    return du;
}

LevelTwoElement oscillatory_lift_exact(const OscillatoryNoise& noise, double s, double t) {
    validate_noise(noise);
    if (t < s) throw InvalidInterval("oscillatory lift: need s <= t");
    if (t == s) return t2_identity(3);

    const double eta = noise.eta;
    const double w = noise.frequency();
    const double a1 = noise.b1 / eta;
    const double a2 = noise.b2 / eta;
    const double cs = std::cos(w * s), ct = std::cos(w * t);
    const double ss = std::sin(w * s), st = std::sin(w * t);
    const double s2s = std::sin(2.0 * w * s), s2t = std::sin(2.0 * w * t);
    const double h = t - s;

    const Vec us = oscillatory_value(noise, s);
    const Vec ut = oscillatory_value(noise, t);

    // F[j][k] = int_s^t u_j du_k, from antiderivatives of products of
    // polynomials, sines and cosines.
    Mat f(3, 3);
    f(0, 0) = 0.5 * (t * t - s * s);
    f(0, 1) = a1 * ((t * ct - st / w) - (s * cs - ss / w));
    f(0, 2) = a2 * ((t * st + ct / w) - (s * ss + cs / w));
    f(1, 0) = a1 * ((st - ss) / w - h);
    f(2, 0) = -a2 * (ct - cs) / w;
    f(1, 1) = 0.5 * (ut[1] * ut[1] - us[1] * us[1]);
    f(2, 2) = 0.5 * (ut[2] * ut[2] - us[2] * us[2]);
    const double b1b2 = noise.b1 * noise.b2;
    f(1, 2) = b1b2 * (0.5 * h + (s2t - s2s) / (4.0 * w) - (st - ss) / w);
    f(2, 1) = -b1b2 * (0.5 * h - (s2t - s2s) / (4.0 * w));

    LevelTwoElement out{1.0, ut - us, Mat(3, 3)};
    for (Eigen::Index j = 0; j < 3; ++j) {
        for (Eigen::Index k = 0; k < 3; ++k) {
            out.level2(j, k) = f(j, k) - us[j] * out.level1[k];
        }
    }
    // Exact values for the diagonal entries avoid cancellation in F - u_s du.
    for (Eigen::Index j = 0; j < 3; ++j) out.level2(j, j) = 0.5 * out.level1[j] * out.level1[j];
    return out;
}

GridRoughPath oscillatory_grid_lift(const OscillatoryNoise& noise, const std::vector<double>& times) {
    GridRoughPath out;
    out.times = times;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        out.increments.push_back(oscillatory_lift_exact(noise, times[k], times[k + 1]));
    }
    validate_rough_path(out);
    return out;
}

SampledPath oscillatory_sampled(const OscillatoryNoise& noise, const std::vector<double>& times) {
    SampledPath out;
    out.times = times;
    out.values.reserve(times.size());
    for (double t : times) out.values.push_back(oscillatory_value(noise, t));
    return out;
}

LevelTwoElement limit_rough_path_oscillatory(double b1, double b2, double s, double t) {
    if (t < s) throw InvalidInterval("limit rough path: need s <= t");
    const double h = t - s;
    auto out = t2_identity(3);
    out.level1[0] = h;
    out.level2(0, 0) = 0.5 * h * h;
    out.level2(1, 2) = 0.5 * b1 * b2 * h;
    out.level2(2, 1) = -0.5 * b1 * b2 * h;
    return out;
}

GridRoughPath limit_grid_path(double b1, double b2, const std::vector<double>& times) {
    GridRoughPath out;
    out.times = times;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        out.increments.push_back(limit_rough_path_oscillatory(b1, b2, times[k], times[k + 1]));
    }
    validate_rough_path(out);
    return out;
}

RateMatrix oscillatory_rate_matrix(double b1, double b2) {
    RateMatrix r{Mat::Zero(3, 3)};
    r.gamma(1, 2) = 0.5 * b1 * b2;
    r.gamma(2, 1) = -0.5 * b1 * b2;
    return r;
}

RateMatrix wiener_limit_rate_matrix(std::size_t m) {
    if (m < 1) throw InvalidParameter("wiener rate matrix: need m >= 1");
    const auto size = static_cast<Eigen::Index>(m + 1);
    RateMatrix r{Mat::Zero(size, size)};
    for (Eigen::Index j = 1; j < size; ++j) r.gamma(j, j) = 0.5;
    return r;
}

GridRoughPath rate_rough_path(const RateMatrix& rates, const std::vector<double>& times) {
    const auto size = rates.gamma.rows();
    if (size < 1 || rates.gamma.cols() != size) throw InvalidDimension("rate matrix must be square");
    GridRoughPath out;
    out.times = times;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double h = times[k + 1] - times[k];
        LevelTwoElement inc{1.0, Vec::Zero(size), rates.gamma * h};
        inc.level1[0] = h;
        out.increments.push_back(std::move(inc));
    }
    validate_rough_path(out);
    return out;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t cells) {
    if (cells < 1 || !(t1 > t0)) throw InvalidPartition("uniform grid: need cells >= 1 and t1 > t0");
    std::vector<double> times(cells + 1);
    const double h = (t1 - t0) / static_cast<double>(cells);
    for (std::size_t k = 0; k <= cells; ++k) times[k] = t0 + h * static_cast<double>(k);
    times.back() = t1;
    return times;
}

SampledPath wong_zakai_wiener(const WienerConfig& cfg) {
    if (cfg.dims < 1 || cfg.cells < 1 || !(cfg.horizon > 0.0)) {
        throw InvalidParameter("wiener config: need m >= 1, N >= 1, T > 0");
    }
    SampledPath out;
    out.times = uniform_grid(0.0, cfg.horizon, cfg.cells);
    const auto m = static_cast<Eigen::Index>(cfg.dims);
    std::vector<GaussianStream> streams;
    streams.reserve(cfg.dims);
    for (std::size_t j = 0; j < cfg.dims; ++j) streams.emplace_back(derive_seed(cfg.seed, j));

    Vec w = Vec::Zero(m + 1);
    out.values.push_back(w);
    for (std::size_t k = 0; k < cfg.cells; ++k) {
        const double dt = out.times[k + 1] - out.times[k];
        const double scale = std::sqrt(dt);
        w[0] = out.times[k + 1];
        for (Eigen::Index j = 0; j < m; ++j) w[j + 1] += scale * streams[static_cast<std::size_t>(j)].next();
        out.values.push_back(w);
    }
    return out;
}

double antisymmetric_area(const SampledPath& signal, std::size_t j, std::size_t k) {
    validate_path(signal, 2);
    if (j >= signal.dim() || k >= signal.dim()) throw IndexOutOfRange("levy area: channel out of range");
    if (j == k) return 0.0;
    const auto lift = lift_piecewise_linear(signal);
    const auto whole = increment(lift, 0, lift.cells());
    const auto jj = static_cast<Eigen::Index>(j), kk = static_cast<Eigen::Index>(k);
    return 0.5 * (whole.level2(jj, kk) - whole.level2(kk, jj));
}

}  // namespace roughstab
