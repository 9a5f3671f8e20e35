// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "diracfc/gridops.hpp"

namespace diracfc {

// Projections of H = N(Pi_B) + R(Gamma^*_B) + R(Gamma) onto each summand along the other two.
struct Projections {
  Matrix p0;  // onto N(Pi_B)
  Matrix p1;  // onto R(Gamma^*_B)
  Matrix p2;  // onto R(Gamma)
  Index dimKernel = 0;
  Index dimRange1 = 0;
  Index dimRange2 = 0;
  double separation = 0.0;      // smallest singular value of the stacked orthonormal bases
  double kernelResidual = 0.0;  // ||Gamma K|| + ||Gamma^*_B K|| on the kernel basis
  bool rankAmbiguous = false;
};

Projections directProjections(const PiBSystem& sys, double relTol = 1e-10);

// P0 = (I + inPi)^{-1}, P1 = inGamma^*_B (I + inPi)^{-1}, P2 = inGamma (I + inPi)^{-1}.
Projections limitProjections(const PiBSystem& sys, double n);
double defaultLimitParameter(const PiBSystem& sys);  // 1e6 / ||Pi_B||

struct LimitConvergence {
  std::vector<double> parameters;
  std::vector<double> errors;  // max_i ||P_i(n) - P_i||
  double order = 0.0;          // least-squares slope of -log(error) against log(n)
};

LimitConvergence limitConvergence(const PiBSystem& sys, const Projections& reference, double n0, int doublings);

// P~1 = lim inGamma^* B2 (I + inPi)^{-1},  P~2 = lim (I + inPi)^{-1} inB1 Gamma^*.
// With extrapolate, one Richardson step in 1/n removes the leading error.
struct PTilde {
  Matrix p1;
  Matrix p2;
};

PTilde ptilde(const PiBSystem& sys, double n, bool extrapolate = true);

// Oblique projection onto N(T) along R(T).
Matrix kernelProjection(const Matrix& t, double relTol = 1e-10);

struct DerivativeCheck {
  std::array<double, 3> discrepancy{};  // central difference vs closed form, per projection
  double maxDiscrepancy = 0.0;
  double formulaSum = 0.0;            // ||sum of the three closed forms||
  double cancellationResidual = 0.0;  // ||P2 A1 P~1 + P~2 A2 P1||
  double familyH3Residual = 0.0;      // first-order defect of Gamma^* B2 B1 Gamma^* = 0 along the family
};

// Family B1 + z A1, B2 + z A2; central differences at z = +-eps.
DerivativeCheck projectionDerivativeCheck(const Triple& base, const LinearOperator& a1, const LinearOperator& a2,
                                          double eps);

}  // namespace diracfc
