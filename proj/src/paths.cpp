#include "roughstab/paths.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "roughstab/errors.hpp"

namespace roughstab {

void validate_path(const SampledPath& path, std::size_t min_samples) {
    if (path.times.size() < min_samples || path.times.empty()) {
        throw EmptyPath("sampled path needs at least " + std::to_string(min_samples) + " samples");
    }
    if (path.values.size() != path.times.size()) {
        throw InvalidDimension("sampled path: values/times length mismatch");
    }
    const auto n = path.values.front().size();
    if (n == 0) throw InvalidDimension("sampled path: zero-dimensional values");
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        if (path.values[k].size() != n) throw InvalidDimension("sampled path: ragged values");
        if (k > 0 && !(path.times[k] > path.times[k - 1])) {
            throw InvalidPartition("sampled path: times must be strictly increasing");
        }
    }
}

void validate_rough_path(const GridRoughPath& path) {
    if (path.times.size() != path.increments.size() + 1 || path.increments.empty()) {
        throw InvalidPartition("rough path: need N+1 times for N >= 1 increments");
    }
    for (std::size_t k = 1; k < path.times.size(); ++k) {
        if (!(path.times[k] > path.times[k - 1])) {
            throw InvalidPartition("rough path: times must be strictly increasing");
        }
    }
    const auto n = path.increments.front().dim();
    for (const auto& inc : path.increments) {
        if (!inc.well_formed() || inc.dim() != n) {
            throw InvalidDimension("rough path: increments must share one dimension");
        }
    }
}

LevelTwoElement increment(const GridRoughPath& path, std::size_t i, std::size_t j) {
    if (i > j || j > path.cells()) {
        throw IndexOutOfRange("rough path increment: need 0 <= i <= j <= N, got i=" +
                              std::to_string(i) + " j=" + std::to_string(j));
    }
    auto acc = t2_identity(path.dim());
    for (std::size_t k = i; k < j; ++k) acc = t2_product(acc, path.increments[k]);
    return acc;
}

std::vector<LevelTwoElement> prefix_products(const GridRoughPath& path) {
    std::vector<LevelTwoElement> out;
    out.reserve(path.cells() + 1);
    out.push_back(t2_identity(path.dim()));
    for (const auto& inc : path.increments) out.push_back(t2_product(out.back(), inc));
    return out;
}

GridRoughPath lift_piecewise_linear(const SampledPath& signal) {
    validate_path(signal, 2);
    GridRoughPath out;
    out.times = signal.times;
    out.increments.reserve(signal.size() - 1);
    for (std::size_t k = 0; k + 1 < signal.size(); ++k) {
        out.increments.push_back(segment_lift(signal.values[k + 1] - signal.values[k]));
    }
    return out;
}

double p_variation(const SampledPath& signal, double p) {
    if (!(p >= 1.0)) throw InvalidParameter("p-variation: p must be >= 1");
    validate_path(signal, 1);
    const std::size_t n = signal.size();
    // best[k]: largest sum over subdivisions t_0 = s_0 < ... < s_r = t_k.
    std::vector<double> best(n, -std::numeric_limits<double>::infinity());
    best[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            const double term = std::pow((signal.values[k] - signal.values[j]).norm(), p);
            best[k] = std::max(best[k], best[j] + term);
        }
    }
    return std::pow(best[n - 1], 1.0 / p);
}

double dp_distance(const GridRoughPath& x, const GridRoughPath& y, double p) {
    if (!(p >= 2.0 && p < 3.0)) throw InvalidParameter("d_p distance: p must lie in [2, 3)");
    validate_rough_path(x);
    validate_rough_path(y);
    if (x.times != y.times) throw InvalidPartition("d_p distance: partitions differ");
    if (x.dim() != y.dim()) throw InvalidDimension("d_p distance: dimensions differ");

    const std::size_t nodes = x.times.size();
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> best1(nodes, ninf), best2(nodes, ninf);
    best1[0] = 0.0;
    best2[0] = 0.0;
    // Nodes are finalised in increasing order; edges a -> b carry the level
    // differences of the composite increment over cells [a, b).
    for (std::size_t a = 0; a + 1 < nodes; ++a) {
        auto xa = t2_identity(x.dim());
        auto ya = t2_identity(y.dim());
        for (std::size_t b = a + 1; b < nodes; ++b) {
            xa = t2_product(xa, x.increments[b - 1]);
            ya = t2_product(ya, y.increments[b - 1]);
            const double d1 = (xa.level1 - ya.level1).norm();
            const double d2 = (xa.level2 - ya.level2).cwiseAbs().maxCoeff();
            best1[b] = std::max(best1[b], best1[a] + std::pow(d1, p));
            best2[b] = std::max(best2[b], best2[a] + std::pow(d2, p / 2.0));
        }
    }
    return std::max(std::pow(best1.back(), 1.0 / p), std::pow(best2.back(), 1.0 / p));
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& text, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    while (used < text.size() && (text[used] == ' ' || text[used] == '\r')) ++used;
    if (used == 0 || used != text.size()) {
        throw ConfigError("csv line " + std::to_string(line_no) + ": bad number '" + text + "'");
    }
    return v;
}

}  // namespace

SampledPath read_path_csv(std::istream& in) {
    SampledPath path;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_commas(line);
        if (!header_seen) {
            if (fields.size() < 2 || fields[0] != "t") {
                throw ConfigError("csv: header must be t,x1,...,xn");
            }
            for (std::size_t i = 1; i < fields.size(); ++i) {
                if (fields[i] != "x" + std::to_string(i)) {
                    throw ConfigError("csv: header column " + std::to_string(i) + " must be x" +
                                      std::to_string(i));
                }
            }
            columns = fields.size();
            header_seen = true;
            continue;
        }
        if (fields.size() != columns) {
            throw ConfigError("csv line " + std::to_string(line_no) + ": expected " +
                              std::to_string(columns) + " fields");
        }
        path.times.push_back(parse_double(fields[0], line_no));
        Vec v(static_cast<Eigen::Index>(columns - 1));
        for (std::size_t i = 1; i < columns; ++i) v[static_cast<Eigen::Index>(i - 1)] = parse_double(fields[i], line_no);
        path.values.push_back(std::move(v));
    }
    if (!header_seen) throw ConfigError("csv: missing header");
    validate_path(path, 1);
    return path;
}

SampledPath read_path_csv_file(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw ConfigError("cannot open " + filename);
    return read_path_csv(in);
}

void write_path_csv(std::ostream& out, const SampledPath& path,
                    const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << 't';
    for (std::size_t i = 1; i <= path.dim(); ++i) out << ",x" << i;
    out << '\n';
    for (std::size_t k = 0; k < path.size(); ++k) {
        out << format_double(path.times[k]);
        for (Eigen::Index i = 0; i < path.values[k].size(); ++i) {
            out << ',' << format_double(path.values[k][i]);
        }
        out << '\n';
    }
}

}  // namespace roughstab
