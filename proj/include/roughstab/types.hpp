#pragma once

#include <Eigen/Core>

namespace roughstab {

/// Column vector in R^n (states, inputs, gradients).
using Vec = Eigen::VectorXd;

/// Dense row-major matrix (level-2 tensors, Jacobians).
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace roughstab
