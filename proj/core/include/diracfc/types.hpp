// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace diracfc {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace diracfc
