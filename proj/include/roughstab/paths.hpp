#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "roughstab/tensor_algebra.hpp"
#include "roughstab/types.hpp"

namespace roughstab {

/// Vector-valued signal sampled on a strictly increasing time grid.
struct SampledPath {
    std::vector<double> times;
    std::vector<Vec> values;

    std::size_t size() const noexcept { return times.size(); }
    std::size_t dim() const noexcept { return values.empty() ? 0 : static_cast<std::size_t>(values.front().size()); }
};

/// Throws EmptyPath / InvalidPartition / InvalidDimension on malformed paths.
void validate_path(const SampledPath& path, std::size_t min_samples = 1);

/// Level-2 rough path on a partition, stored as per-cell increments:
/// increments[k] is X_{t_k, t_{k+1}}.
struct GridRoughPath {
    std::vector<double> times;
    std::vector<LevelTwoElement> increments;

    std::size_t cells() const noexcept { return increments.size(); }
    std::size_t dim() const noexcept { return increments.empty() ? 0 : increments.front().dim(); }
};

void validate_rough_path(const GridRoughPath& path);

/// Chen product of increments[i..j); identity when i == j.
LevelTwoElement increment(const GridRoughPath& path, std::size_t i, std::size_t j);

/// Running products X_{t_0, t_k} for k = 0..N.
std::vector<LevelTwoElement> prefix_products(const GridRoughPath& path);

/// Exact level-2 lift of the piecewise-linear interpolation of `signal`.
GridRoughPath lift_piecewise_linear(const SampledPath& signal);

/// Grid-restricted p-variation (Euclidean increments), O(N^2) dynamic programme.
/// This is a lower bound of the continuous-time supremum.
double p_variation(const SampledPath& signal, double p);

/// Grid-restricted inhomogeneous p-variation distance between two rough paths
/// sharing a partition. Level 1 uses the Euclidean norm, level 2 the
/// entrywise max-norm. p must lie in [2, 3).
double dp_distance(const GridRoughPath& x, const GridRoughPath& y, double p);

/// CSV with header `t,x1,...,xn`; lines starting with '#' are comments.
SampledPath read_path_csv(std::istream& in);
SampledPath read_path_csv_file(const std::string& filename);

/// Writes `# <comment>` lines, the header, then one row per sample in %.17g.
void write_path_csv(std::ostream& out, const SampledPath& path,
                    const std::vector<std::string>& comments = {});

/// Full-precision decimal rendering used by every CSV writer.
std::string format_double(double value);

}  // namespace roughstab
