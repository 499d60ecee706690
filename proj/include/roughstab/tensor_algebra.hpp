#pragma once

#include <cstddef>

#include "roughstab/types.hpp"

namespace roughstab {

/// Element of the truncated tensor algebra T^2(R^n): a scalar, a vector and
/// an n x n matrix. Increments of multiplicative functionals have level0 = 1.
struct LevelTwoElement {
    double level0 = 1.0;
    Vec level1;
    Mat level2;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(level1.size()); }

    /// True when level1 and level2 agree on the dimension.
    bool well_formed() const noexcept;

    /// Symmetric and antisymmetric parts of level2.
    Mat symmetric_part() const;
    Mat antisymmetric_part() const;
};

/// (1, 0, 0) in dimension `dim`. Throws InvalidDimension for dim = 0.
LevelTwoElement t2_identity(std::size_t dim);

/// Build an element from its parts, validating dimensions.
LevelTwoElement t2_make(double level0, Vec level1, Mat level2);

/// Truncated tensor product: C^k = sum_{l=0}^k A^l (x) B^{k-l}.
LevelTwoElement t2_product(const LevelTwoElement& a, const LevelTwoElement& b);

/// Inverse with respect to t2_product for elements with level0 = 1.
LevelTwoElement t2_inverse(const LevelTwoElement& a);

/// Entrywise max-norm of (x_st (x) x_tu - x_su) over levels 1 and 2.
double chen_defect(const LevelTwoElement& x_st, const LevelTwoElement& x_tu,
                   const LevelTwoElement& x_su);

/// Entrywise max-norm of a - b over levels 1 and 2.
double t2_max_distance(const LevelTwoElement& a, const LevelTwoElement& b);

/// Lift of a straight segment with increment delta: (1, delta, delta (x) delta / 2).
LevelTwoElement segment_lift(const Vec& delta);

}  // namespace roughstab
