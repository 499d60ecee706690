#include "roughstab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "roughstab/errors.hpp"
#include "roughstab/random.hpp"

namespace roughstab {

Mat jacobian_fd(const FieldFn& field, const Vec& x, double scale) {
    const Vec f0 = field(x);
    if (!f0.allFinite()) throw NumericalFailure("jacobian: field is not finite at x");
    const double step = scale * std::max(1.0, x.norm());
    Mat jac(f0.size(), x.size());
    Vec xp = x, xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + step;
        xm[i] = x[i] - step;
        jac.col(i) = (field(xp) - field(xm)) / (2.0 * step);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    if (!jac.allFinite()) throw NumericalFailure("jacobian: non-finite difference quotient");
    return jac;
}

void validate_system(const VectorFieldSystem& g) {
    if (g.n == 0 || g.fields.empty()) throw InvalidDimension("vector field system: empty");
    for (const auto& f : g.fields) {
        if (!f.eval) throw InvalidParameter("vector field system: missing field");
    }
}

VectorFieldSystem bilinear_system(const std::vector<Mat>& matrices, const std::vector<Vec>& offsets) {
    if (matrices.empty()) throw InvalidDimension("bilinear system: no matrices");
    const auto n = matrices.front().rows();
    if (!offsets.empty() && offsets.size() != matrices.size()) {
        throw InvalidDimension("bilinear system: offsets must match matrices");
    }
    VectorFieldSystem g;
    g.n = static_cast<std::size_t>(n);
    for (std::size_t j = 0; j < matrices.size(); ++j) {
        const Mat a = matrices[j];
        if (a.rows() != n || a.cols() != n) throw InvalidDimension("bilinear system: matrices must be n x n");
        const Vec c = offsets.empty() ? Vec::Zero(n) : offsets[j];
        if (c.size() != n) throw InvalidDimension("bilinear system: offset length");
        g.fields.push_back({[a, c](const Vec& x) -> Vec { return a * x + c; },
                            [a](const Vec&) -> Mat { return a; }});
    }
    return g;
}

VectorFieldSystem motivational_system() {
    Mat f(2, 2), a1(2, 2), a2(2, 2);
    f << -7, 0, 0, 1;
    a1 << 0, 0, 1, 0;
    a2 << 0, 1, -4, 0;
    return bilinear_system({f, a1, a2});
}

VectorFieldSystem example_1d_system() {
    VectorFieldSystem g;
    g.n = 1;
    g.fields.push_back({[](const Vec& x) -> Vec { return Vec::Zero(x.size()); },
                        [](const Vec&) -> Mat { return Mat::Zero(1, 1); }});
    g.fields.push_back({[](const Vec&) -> Vec { return Vec::Ones(1); },
                        [](const Vec&) -> Mat { return Mat::Zero(1, 1); }});
    g.fields.push_back({[](const Vec& x) -> Vec { return Vec::Constant(1, -x[0] * x[0]); },
                        [](const Vec& x) -> Mat { return Mat::Constant(1, 1, -2.0 * x[0]); }});
    return g;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    std::vector<std::string> comments{"integrator=" + traj.integrator, "h=" + format_double(traj.step)};
    if (traj.seed) comments.push_back("seed=" + std::to_string(*traj.seed));
    write_path_csv(out, traj.as_path(), comments);
}

void check_state(const Vec& x, double t, double box) {
    if (x.hasNaN()) throw NumericalFailure("state became NaN at t=" + format_double(t));
    if (!(x.norm() <= box)) {
        throw BlowUp("state left the bounding box |x| <= " + format_double(box) + " at t=" + format_double(t), t);
    }
}

namespace {

class Recorder {
public:
    Recorder(Trajectory& traj, std::size_t every) : traj_(traj), every_(std::max<std::size_t>(every, 1)) {}

    void record(std::size_t step_index, bool last, double t, const Vec& x) {
        if (last || step_index % every_ == 0) {
            traj_.times.push_back(t);
            traj_.states.push_back(x);
        }
    }

private:
    Trajectory& traj_;
    std::size_t every_;
};

std::size_t step_count(double horizon, double h) {
    if (!(h > 0.0) || !(horizon > 0.0)) throw InvalidParameter("integrator: need h > 0 and T > 0");
    const double ratio = horizon / h;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(rounded);
    return static_cast<std::size_t>(std::ceil(ratio));
}

}  // namespace

Trajectory rough_euler_simulate(const VectorFieldSystem& g, const GridRoughPath& driver, const Vec& x0,
                                const SimulationOptions& opts) {
    validate_system(g);
    validate_rough_path(driver);
    if (driver.dim() != g.fields.size()) {
        throw InvalidDimension("rough euler: driver dimension must equal m + 1");
    }
    if (static_cast<std::size_t>(x0.size()) != g.n) throw InvalidDimension("rough euler: x0 dimension");

    Trajectory traj;
    traj.integrator = "rough-euler";
    traj.step = driver.times[1] - driver.times[0];
    Recorder rec(traj, opts.record_every);
    Vec x = x0;
    check_state(x, driver.times.front(), opts.box);
    rec.record(0, false, driver.times.front(), x);

    const std::size_t channels = g.fields.size();
    std::vector<Vec> values(channels);
    for (std::size_t k = 0; k < driver.cells(); ++k) {
        const auto& inc = driver.increments[k];
        for (std::size_t j = 0; j < channels; ++j) values[j] = g.fields[j](x);
        Vec dx = Vec::Zero(x.size());
        for (std::size_t j = 0; j < channels; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            if (inc.level1[jj] != 0.0) dx += values[j] * inc.level1[jj];
            bool any = false;
            for (Eigen::Index kk = 0; kk < inc.level2.rows(); ++kk) any = any || inc.level2(kk, jj) != 0.0;
            if (!any) continue;
            const Mat jac = g.fields[j].jacobian_at(x);
            for (std::size_t c = 0; c < channels; ++c) {
                const double w = inc.level2(static_cast<Eigen::Index>(c), jj);
                if (w != 0.0) dx += w * (jac * values[c]);
            }
        }
        x += dx;
        const double t = driver.times[k + 1];
        check_state(x, t, opts.box);
        rec.record(k + 1, k + 1 == driver.cells(), t, x);
    }
    return traj;
}

VectorField limit_drift(const VectorFieldSystem& g, const RateMatrix& rates) {
    validate_system(g);
    if (static_cast<std::size_t>(rates.gamma.rows()) != g.fields.size() ||
        rates.gamma.cols() != rates.gamma.rows()) {
        throw InvalidDimension("limit drift: rate matrix must be (m+1) x (m+1)");
    }
    auto fields = g.fields;
    const Mat gamma = rates.gamma;
    return {[fields, gamma](const Vec& x) -> Vec {
                const std::size_t channels = fields.size();
                std::vector<Vec> values(channels);
                for (std::size_t j = 0; j < channels; ++j) values[j] = fields[j](x);
                Vec out = values[0];
                for (std::size_t j = 0; j < channels; ++j) {
                    const auto jj = static_cast<Eigen::Index>(j);
                    if (gamma.col(jj).isZero(0.0)) continue;
                    const Mat jac = fields[j].jacobian_at(x);
                    for (std::size_t k = 0; k < channels; ++k) {
                        const double w = gamma(static_cast<Eigen::Index>(k), jj);
                        if (w != 0.0) out += w * (jac * values[k]);
                    }
                }
                return out;
            },
            {}};
}

VectorField stratonovich_to_ito_drift(const VectorFieldSystem& g) {
    validate_system(g);
    if (g.inputs() < 1) throw InvalidParameter("ito correction: need m >= 1");
    auto fields = g.fields;
    return {[fields](const Vec& x) -> Vec {
                Vec out = fields[0](x);
                for (std::size_t j = 1; j < fields.size(); ++j) {
                    out += 0.5 * (fields[j].jacobian_at(x) * fields[j](x));
                }
                return out;
            },
            {}};
}

Trajectory ode_simulate(const TimeFieldFn& drift, const Vec& x0, double horizon, double h,
                        const SimulationOptions& opts) {
    const std::size_t steps = step_count(horizon, h);
    Trajectory traj;
    traj.integrator = "rk4";
    traj.step = h;
    Recorder rec(traj, opts.record_every);
    Vec x = x0;
    double t = 0.0;
    check_state(x, t, opts.box);
    rec.record(0, false, t, x);
    for (std::size_t k = 0; k < steps; ++k) {
        const bool last = k + 1 == steps;
        const double t_next = last ? horizon : static_cast<double>(k + 1) * h;
        const double dt = t_next - t;
        const Vec k1 = drift(t, x);
        const Vec k2 = drift(t + 0.5 * dt, x + 0.5 * dt * k1);
        const Vec k3 = drift(t + 0.5 * dt, x + 0.5 * dt * k2);
        const Vec k4 = drift(t + dt, x + dt * k3);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = t_next;
        check_state(x, t, opts.box);
        rec.record(k + 1, last, t, x);
    }
    return traj;
}

Trajectory ode_simulate(const FieldFn& drift, const Vec& x0, double horizon, double h,
                        const SimulationOptions& opts) {
    return ode_simulate([&drift](double, const Vec& x) { return drift(x); }, x0, horizon, h, opts);
}

double ode_step_halving_error(const FieldFn& drift, const Vec& x0, double horizon, double h) {
    SimulationOptions opts;
    opts.record_every = static_cast<std::size_t>(-1);
    const Vec coarse = ode_simulate(drift, x0, horizon, h, opts).final_state();
    const Vec fine = ode_simulate(drift, x0, horizon, 0.5 * h, opts).final_state();
    return (coarse - fine).cwiseAbs().maxCoeff();
}

TimeFieldFn driven_field(const VectorFieldSystem& g, std::function<Vec(double)> input_derivative) {
    validate_system(g);
    auto fields = g.fields;
    return [fields, du = std::move(input_derivative)](double t, const Vec& x) -> Vec {
        const Vec rate = du(t);
        if (static_cast<std::size_t>(rate.size()) != fields.size()) {
            throw InvalidDimension("driven field: input derivative must have m + 1 channels");
        }
        Vec out = Vec::Zero(x.size());
        for (std::size_t j = 0; j < fields.size(); ++j) out += fields[j](x) * rate[static_cast<Eigen::Index>(j)];
        return out;
    };
}

double resolved_step(const OscillatoryNoise& noise, double base_step) {
    if (!(base_step > 0.0)) throw InvalidParameter("resolved step: base step must be positive");
    const double limit = noise.period() / 50.0;
    if (base_step <= limit) return base_step;
    return base_step / std::ceil(base_step / limit);
}

Trajectory finite_eta_simulate(const VectorFieldSystem& g, const OscillatoryNoise& noise, const Vec& x0,
                               double horizon, double base_step, const SimulationOptions& opts) {
    validate_noise(noise);
    if (g.inputs() != 2) throw InvalidDimension("oscillatory driver needs a system with m = 2");
    const double h = resolved_step(noise, base_step);
    SimulationOptions inner = opts;
    inner.record_every = opts.record_every * static_cast<std::size_t>(std::llround(base_step / h));
    auto traj = ode_simulate(driven_field(g, [noise](double t) { return oscillatory_derivative(noise, t); }),
                             x0, horizon, h, inner);
    traj.integrator = "rk4-oscillatory-eta" + std::to_string(noise.eta);
    return traj;
}

Trajectory sde_simulate(const VectorFieldSystem& g, SdeMode mode, const Vec& x0, double horizon, double h,
                        std::uint64_t seed, const SimulationOptions& opts) {
    validate_system(g);
    if (static_cast<std::size_t>(x0.size()) != g.n) throw InvalidDimension("sde: x0 dimension");
    const std::size_t steps = step_count(horizon, h);
    const std::size_t m = g.inputs();
    std::vector<GaussianStream> streams;
    streams.reserve(m);
    for (std::size_t j = 0; j < m; ++j) streams.emplace_back(derive_seed(seed, j));

    Trajectory traj;
    traj.integrator = mode == SdeMode::ito ? "euler-maruyama" : "heun-stratonovich";
    traj.step = h;
    traj.seed = seed;
    Recorder rec(traj, opts.record_every);
    Vec x = x0;
    double t = 0.0;
    check_state(x, t, opts.box);
    rec.record(0, false, t, x);
    std::vector<double> dw(m);
    for (std::size_t k = 0; k < steps; ++k) {
        const bool last = k + 1 == steps;
        const double t_next = last ? horizon : static_cast<double>(k + 1) * h;
        const double dt = t_next - t;
        const double scale = std::sqrt(dt);
        for (std::size_t j = 0; j < m; ++j) dw[j] = scale * streams[j].next();

        Vec incr = g.fields[0](x) * dt;
        for (std::size_t j = 0; j < m; ++j) incr += g.fields[j + 1](x) * dw[j];
        if (mode == SdeMode::stratonovich) {
            const Vec pred = x + incr;
            Vec incr_pred = g.fields[0](pred) * dt;
            for (std::size_t j = 0; j < m; ++j) incr_pred += g.fields[j + 1](pred) * dw[j];
            incr = 0.5 * (incr + incr_pred);
        }
        x += incr;
        t = t_next;
        check_state(x, t, opts.box);
        rec.record(k + 1, last, t, x);
    }
    return traj;
}

}  // namespace roughstab
