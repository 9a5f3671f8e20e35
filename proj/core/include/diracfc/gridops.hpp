// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "diracfc/grid.hpp"
#include "diracfc/linear_operator.hpp"

namespace diracfc {

// Exterior derivative on the full form bundle with forward differences:
// (d u)_{S u {k}}(x) += sign(k, S) (u_S(x + h e_k) - u_S(x)) / h.
LinearOperator buildGamma(const GridSpec& grid);

// Conjugate transpose; the uniform cell weight cancels.
LinearOperator buildAdjoint(const LinearOperator& op);

// Scalar -> C^n forward-difference gradient.
LinearOperator buildGradient(const GridSpec& grid);
// Forward-difference gradient applied to every fiber component: C^dim -> C^(dim*n).
LinearOperator buildComponentGradient(const Space& space);
// Skew-adjoint central difference on a 1D grid.
LinearOperator buildCentralDerivative(const GridSpec& grid);

LinearOperator multiplication(const MatrixField& field, const Space& space);

// Nilpotent Gamma with two bounded multipliers. All three act on one space.
struct Triple {
  LinearOperator gamma;
  LinearOperator b1;
  LinearOperator b2;

  const Space& space() const { return gamma.domain(); }
};

Triple formsTriple(const GridSpec& grid, const MatrixField& b1, const MatrixField& b2);
Triple flatFormsTriple(const GridSpec& grid);

// C^N = V1 + V2 with Gamma = [[0,0],[D,0]], B1 = [[A1,0],[0,0]], B2 = [[0,0],[0,A2]].
// D maps C^{N1}-fields to C^{N2}-fields; V1 comes first in the component order.
Triple buildBlockTriple(const LinearOperator& d, const MatrixField& a1, const MatrixField& a2);

struct PiBSystem {
  LinearOperator gamma;
  LinearOperator gammaStar;
  LinearOperator b1;
  LinearOperator b2;
  LinearOperator gammaStarB;  // B1 Gamma^* B2
  LinearOperator gammaB;      // B2^* Gamma B1^*
  LinearOperator piB;         // Gamma + Gamma^*_B
  LinearOperator piBStar;     // Gamma^* + Gamma_B, the adjoint of piB

  const Space& space() const { return gamma.domain(); }
};

PiBSystem buildPiB(const Triple& triple);

struct MultiplierB {
  MatrixField b1;
  MatrixField b2;
  // Pointwise accretivity constants.
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
};

// Pointwise e^{i phi(x)} (k I + W W^*) with |phi| <= targetOmega and Re >= 0.1.
MatrixField randomAccretiveField(const GridSpec& grid, int dim, double targetOmega, std::uint64_t seed);

// B2 = random accretive field, B1 = its pointwise inverse, so Gamma^* B2 B1 Gamma^* = 0.
MultiplierB randomAccretive(const GridSpec& grid, const FiberLayout& layout, double targetOmega,
                            std::uint64_t seed);

struct HypothesisReport {
  double gammaNorm = 0.0;
  double nilpotencyResidual = 0.0;  // ||Gamma^2||
  double kappa1 = 0.0;              // on R(Gamma^*)
  double kappa2 = 0.0;              // on R(Gamma)
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega = 0.0;               // (omega1 + omega2) / 2
  double h3Residual1 = 0.0;         // ||Gamma^* B2 B1 Gamma^*||
  double h3Residual2 = 0.0;         // ||Gamma B1 B2 Gamma||
  double cancellationResidual = 0.0;
  double coercivityConstant = 0.0;  // min ||Pi u|| / ||grad u|| on R(Pi), Pi = Gamma + Gamma^*
  double localisationBound = 0.0;   // measured ||[Gamma, eta] u|| / (max|grad eta| ||u||)
  bool rangeRankAmbiguous = false;

  bool accretive() const { return kappa1 > 0.0 && kappa2 > 0.0; }
};

HypothesisReport validateHypotheses(const Triple& triple, int sampleCount = 64, std::uint64_t seed = 1);

}  // namespace diracfc
