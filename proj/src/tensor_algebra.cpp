#include "roughstab/tensor_algebra.hpp"

#include <algorithm>
#include <string>

#include "roughstab/errors.hpp"

namespace roughstab {

namespace {

void require_same_dim(const LevelTwoElement& a, const LevelTwoElement& b) {
    if (!a.well_formed() || !b.well_formed() || a.dim() != b.dim()) {
        throw InvalidDimension("tensor algebra: dimension mismatch (" + std::to_string(a.dim()) +
                               " vs " + std::to_string(b.dim()) + ")");
    }
}

}  // namespace

bool LevelTwoElement::well_formed() const noexcept {
    return level1.size() > 0 && level2.rows() == level1.size() && level2.cols() == level1.size();
}

Mat LevelTwoElement::symmetric_part() const { return 0.5 * (level2 + level2.transpose()); }

Mat LevelTwoElement::antisymmetric_part() const { return 0.5 * (level2 - level2.transpose()); }

LevelTwoElement t2_identity(std::size_t dim) {
    if (dim == 0) throw InvalidDimension("tensor algebra: dimension must be positive");
    const auto n = static_cast<Eigen::Index>(dim);
    return {1.0, Vec::Zero(n), Mat::Zero(n, n)};
}

LevelTwoElement t2_make(double level0, Vec level1, Mat level2) {
    LevelTwoElement e{level0, std::move(level1), std::move(level2)};
    if (!e.well_formed()) throw InvalidDimension("tensor algebra: malformed element");
    return e;
}

LevelTwoElement t2_product(const LevelTwoElement& a, const LevelTwoElement& b) {
    require_same_dim(a, b);
    LevelTwoElement c;
    c.level0 = a.level0 * b.level0;
    c.level1 = a.level0 * b.level1 + b.level0 * a.level1;
    c.level2 = a.level0 * b.level2 + a.level1 * b.level1.transpose() + b.level0 * a.level2;
    return c;
}

LevelTwoElement t2_inverse(const LevelTwoElement& a) {
    if (!a.well_formed()) throw InvalidDimension("tensor algebra: malformed element");
    return {1.0, -a.level1, -a.level2 + a.level1 * a.level1.transpose()};
}

double t2_max_distance(const LevelTwoElement& a, const LevelTwoElement& b) {
    require_same_dim(a, b);
    const double d1 = (a.level1 - b.level1).cwiseAbs().maxCoeff();
    const double d2 = (a.level2 - b.level2).cwiseAbs().maxCoeff();
    return std::max(d1, d2);
}

double chen_defect(const LevelTwoElement& x_st, const LevelTwoElement& x_tu,
                   const LevelTwoElement& x_su) {
    require_same_dim(x_st, x_tu);
    require_same_dim(x_st, x_su);
    return t2_max_distance(t2_product(x_st, x_tu), x_su);
}

LevelTwoElement segment_lift(const Vec& delta) {
    if (delta.size() == 0) throw InvalidDimension("segment lift: empty increment");
    return {1.0, delta, 0.5 * delta * delta.transpose()};
}

}  // namespace roughstab
