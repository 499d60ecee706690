#include "roughstab/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "roughstab/errors.hpp"

namespace roughstab {

namespace {

constexpr double kGradientScale = 1e-6;
constexpr double kNestedScale = 1e-4;

void require_in_domain(const ScalarFunction& v, const Vec& x) {
    if (!v.contains(x)) throw DomainError("lyapunov: point outside the domain of v");
}

Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double scale) {
    const double step = scale * std::max(1.0, x.norm());
    Vec grad(x.size());
    Vec xp = x, xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + step;
        xm[i] = x[i] - step;
        grad[i] = (f(xp) - f(xm)) / (2.0 * step);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    if (!grad.allFinite()) throw NumericalFailure("lyapunov: non-finite gradient");
    return grad;
}

}  // namespace

Vec ScalarFunction::gradient_at(const Vec& x) const {
    return gradient ? gradient(x) : central_gradient(value, x, kGradientScale);
}

ScalarFunction quadratic_lyapunov(double scale) {
    ScalarFunction v;
    v.value = [scale](const Vec& x) { return scale * x.squaredNorm(); };
    v.gradient = [scale](const Vec& x) -> Vec { return 2.0 * scale * x; };
    v.hessian = [scale](const Vec& x) -> Mat { return 2.0 * scale * Mat::Identity(x.size(), x.size()); };
    return v;
}

double lie_derivative(const ScalarFunction& v, const VectorField& gj, const Vec& x) {
    require_in_domain(v, x);
    return v.gradient_at(x).dot(gj(x));
}

double second_lie_derivative(const ScalarFunction& v, const VectorField& gj, const VectorField& gk,
                             const Vec& x) {
    require_in_domain(v, x);
    Vec inner_grad;
    if (v.gradient && v.hessian && gj.jacobian) {
        inner_grad = v.hessian(x) * gj(x) + gj.jacobian(x).transpose() * v.gradient(x);
    } else {
        inner_grad = central_gradient([&](const Vec& y) { return v.gradient_at(y).dot(gj(y)); }, x, kNestedScale);
    }
    return inner_grad.dot(gk(x));
}

double dv_along_limit(const ScalarFunction& v, const VectorField& drift, const Vec& x) {
    require_in_domain(v, x);
    return v.gradient_at(x).dot(drift(x));
}

double rough_generator(const ScalarFunction& v, const VectorFieldSystem& g, const RateMatrix& rates,
                       const Vec& x) {
    validate_system(g);
    if (static_cast<std::size_t>(rates.gamma.rows()) != g.fields.size()) {
        throw InvalidDimension("rough generator: rate matrix must be (m+1) x (m+1)");
    }
    double out = lie_derivative(v, g.fields[0], x);
    for (std::size_t j = 0; j < g.fields.size(); ++j) {
        for (std::size_t k = 0; k < g.fields.size(); ++k) {
            const double w = rates.gamma(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
            if (w != 0.0) out += w * second_lie_derivative(v, g.fields[j], g.fields[k], x);
        }
    }
    return out;
}

double stochastic_generator(const ScalarFunction& v, const VectorFieldSystem& g, const Vec& x) {
    validate_system(g);
    if (g.inputs() < 1) throw InvalidParameter("stochastic generator: need m >= 1");
    double out = lie_derivative(v, g.fields[0], x);
    for (std::size_t j = 1; j < g.fields.size(); ++j) {
        out += 0.5 * second_lie_derivative(v, g.fields[j], g.fields[j], x);
    }
    return out;
}

GridSpec parse_grid_spec(const std::string& text) {
    GridSpec spec;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("grid spec: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        try {
            if (key == "dirs") spec.directions = std::stoul(val);
            else if (key == "rmin") spec.r_min = std::stod(val);
            else if (key == "rmax") spec.r_max = std::stod(val);
            else if (key == "shells") spec.shells = std::stoul(val);
            else if (key == "local") spec.local_radius = std::stod(val);
            else throw ConfigError("grid spec: unknown key '" + key + "'");
        } catch (const std::logic_error&) {
            throw ConfigError("grid spec: bad value for '" + key + "'");
        }
    }
    if (spec.directions < 1 || spec.shells < 1 || !(spec.r_min > 0.0) || !(spec.r_max >= spec.r_min)) {
        throw ConfigError("grid spec: need dirs >= 1, shells >= 1, 0 < rmin <= rmax");
    }
    return spec;
}

std::vector<Vec> make_radial_grid(std::size_t n, const GridSpec& spec) {
    if (n == 0) throw InvalidDimension("grid: dimension must be positive");
    if (spec.directions < 1 || spec.shells < 1 || !(spec.r_min > 0.0) || !(spec.r_max >= spec.r_min)) {
        throw InvalidParameter("grid: need directions >= 1, shells >= 1, 0 < r_min <= r_max");
    }
    const auto dim = static_cast<Eigen::Index>(n);
    std::vector<Vec> dirs;
    if (n == 1) {
        dirs = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
    } else if (n == 2) {
        for (std::size_t k = 0; k < spec.directions; ++k) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(spec.directions);
            Vec d(2);
            d << std::cos(a), std::sin(a);
            dirs.push_back(d);
        }
    } else {
        for (Eigen::Index i = 0; i < dim; ++i) {
            dirs.push_back(Vec::Unit(dim, i));
            dirs.push_back(-Vec::Unit(dim, i));
        }
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            Vec d(dim);
            for (Eigen::Index i = 0; i < dim; ++i) d[i] = (mask >> i) & 1U ? -1.0 : 1.0;
            dirs.push_back(d.normalized());
        }
    }
    std::vector<Vec> grid;
    grid.reserve(dirs.size() * spec.shells);
    const double ratio = spec.shells > 1 ? std::pow(spec.r_max / spec.r_min, 1.0 / static_cast<double>(spec.shells - 1)) : 1.0;
    for (std::size_t s = 0; s < spec.shells; ++s) {
        const double r = s + 1 == spec.shells ? spec.r_max : spec.r_min * std::pow(ratio, static_cast<double>(s));
        for (const auto& d : dirs) grid.push_back(r * d);
    }
    return grid;
}

UasasResult check_uasas_condition(const ScalarFunction& v, const VectorFieldSystem& g,
                                  const std::vector<Vec>& grid, double tol) {
    validate_system(g);
    if (grid.empty()) throw InvalidParameter("uasas check: empty grid");
    for (const auto& x : grid) {
        for (std::size_t j = 1; j < g.fields.size(); ++j) {
            const double value = lie_derivative(v, g.fields[j], x);
            if (!(std::abs(value) <= tol)) return {false, UasasWitness{j, x, value}};
        }
    }
    return {true, std::nullopt};
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::not_certified: return "not-certified";
        case Verdict::stable_in_roughness: return "stable-in-roughness";
        case Verdict::locally_asir: return "locally-ASiR";
        case Verdict::globally_asir: return "globally-ASiR";
    }
    return "unknown";
}

StabilityReport check_asir(const ScalarFunction& v, const VectorField& drift, const std::vector<Vec>& grid,
                           const AsirOptions& opts) {
    if (grid.empty()) throw InvalidParameter("asir check: empty grid");
    StabilityReport report;
    const auto n = grid.front().size();
    const Vec origin = Vec::Zero(n);

    const Vec drift0 = drift(origin);
    if (!(drift0.cwiseAbs().maxCoeff() <= opts.equilibrium_tol)) {
        report.reason = "origin is not an equilibrium: |drift(0)| = " + format_double(drift0.cwiseAbs().maxCoeff());
        return report;
    }
    if (!(std::abs(v.value(origin)) <= opts.equilibrium_tol)) {
        report.reason = "candidate does not vanish at the origin";
        return report;
    }

    report.grid = map_indices(
        grid.size(),
        [&](std::size_t i) {
            const Vec& x = grid[i];
            GridEvaluation e;
            e.point = x;
            e.value = v.value(x);
            e.dv = dv_along_limit(v, drift, x);
            e.violation = !(e.dv <= opts.tol);
            return e;
        },
        opts.execution);

    double local_rate = std::numeric_limits<double>::infinity();
    double global_rate = std::numeric_limits<double>::infinity();
    double local_lower = std::numeric_limits<double>::infinity();
    double lower = std::numeric_limits<double>::infinity();
    double upper = 0.0;
    bool local_sign = true, global_sign = true;
    double num = 0.0, den = 0.0;
    for (const auto& e : report.grid) {
        const double r2 = e.point.squaredNorm();
        const bool local = std::sqrt(r2) <= opts.local_radius;
        const double rate = -e.dv / r2;
        const double vq = e.value / r2;
        report.worst_value = std::max(report.worst_value, e.dv);
        report.tested_radius = std::max(report.tested_radius, std::sqrt(r2));
        if (e.violation) report.violations.push_back(e.point);
        global_sign = global_sign && !e.violation;
        global_rate = std::min(global_rate, rate);
        lower = std::min(lower, vq);
        upper = std::max(upper, vq);
        num += -e.dv * r2;
        den += r2 * r2;
        if (local) {
            local_sign = local_sign && !e.violation;
            local_rate = std::min(local_rate, rate);
            local_lower = std::min(local_lower, vq);
        }
    }
    report.margin = global_rate;
    report.fitted_rate = den > 0.0 ? num / den : 0.0;
    report.lower_bound = lower;
    report.upper_bound = upper;

    const bool stable = local_sign && local_lower > 0.0 && std::isfinite(local_lower);
    const bool locally = stable && local_rate >= opts.min_rate;
    const bool globally = locally && global_sign && global_rate >= opts.min_rate && lower >= opts.min_rate;
    if (globally) {
        report.verdict = Verdict::globally_asir;
        report.reason = "DV^1 <= -c|x|^2 and a|x|^2 <= v <= b|x|^2 up to the tested radius";
    } else if (locally) {
        report.verdict = Verdict::locally_asir;
        report.reason = "strict decrease certified on the local grid only";
    } else if (stable) {
        report.verdict = Verdict::stable_in_roughness;
        report.reason = "DV^1 <= 0 on the local grid but no positive quadratic decrease rate";
    } else {
        report.verdict = Verdict::not_certified;
        report.reason = local_sign ? "candidate is not positive definite on the local grid"
                                   : "DV^1 > 0 at grid points";
    }
    return report;
}

StabilityReport check_asir(const ScalarFunction& v, const VectorField& drift, std::size_t n,
                           const GridSpec& spec, Execution exec) {
    AsirOptions opts;
    opts.local_radius = spec.local_radius;
    opts.execution = exec;
    return check_asir(v, drift, make_radial_grid(n, spec), opts);
}

void write_report_csv(std::ostream& out, const StabilityReport& report) {
    out << "# verdict=" << to_string(report.verdict) << '\n';
    out << "# reason=" << report.reason << '\n';
    if (report.grid.empty()) return;
    const auto n = report.grid.front().point.size();
    for (Eigen::Index i = 1; i <= n; ++i) out << 'x' << i << ',';
    out << "v,dv,violation\n";
    for (const auto& e : report.grid) {
        for (Eigen::Index i = 0; i < n; ++i) out << format_double(e.point[i]) << ',';
        out << format_double(e.value) << ',' << format_double(e.dv) << ',' << (e.violation ? 1 : 0) << '\n';
    }
}

std::string summary_line(const StabilityReport& report) {
    std::ostringstream os;
    os << "verdict=" << to_string(report.verdict) << " tested_radius=" << format_double(report.tested_radius)
       << " worst_dv=" << format_double(report.worst_value) << " margin=" << format_double(report.margin)
       << " violations=" << report.violations.size();
    if (report.verdict == Verdict::globally_asir) os << " (up to tested radius)";
    return os.str();
}

}  // namespace roughstab
