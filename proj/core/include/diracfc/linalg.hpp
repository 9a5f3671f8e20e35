// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "diracfc/types.hpp"

namespace diracfc::linalg {

// Largest singular value.
double opNorm(const Matrix& a);
// Power iteration on A^*A; exact zero for structurally or numerically empty matrices.
double sparseNormEstimate(const SparseMatrix& a, int iterations = 200);

bool isHermitian(const Matrix& a, double relTol = 1e-12);

struct SubspaceBasis {
  Matrix basis;                 // orthonormal columns
  RealVector singularValues;    // of the matrix the basis was extracted from
  bool rankAmbiguous = false;   // a singular value sits within 10x of the cut
};

// Cut at relTol * largest singular value.
SubspaceBasis rangeBasis(const Matrix& a, double relTol = 1e-10);
SubspaceBasis nullBasis(const Matrix& a, double relTol = 1e-10);

struct NumericalRange {
  double kappa = 0.0;  // min Re <Mv, v> over unit v
  double omega = 0.0;  // max |arg <Mv, v>|; pi/2 once kappa <= 0
  bool empty = false;
};

// Boundary of the numerical range is traced by top eigenvectors of Re(e^{-ia} M).
NumericalRange numericalRange(const Matrix& m, int samples = 64);

struct Extremes {
  double low = 0.0;
  double high = 0.0;
};

// Extreme eigenvalues of H y = lambda G y with H Hermitian and G Hermitian positive definite.
Extremes generalizedExtremes(const Matrix& h, const Matrix& g);

Vector eigenvalues(const Matrix& a);

// max |arg(+-lambda)| over eigenvalues with |lambda| > zeroTol.
double spectralAngle(const Vector& eigenvalues, double zeroTol);

// Orthonormal basis of the orthogonal complement of the columns of q (q orthonormal).
Matrix orthogonalComplement(const Matrix& q, Index ambientDim);

}  // namespace diracfc::linalg
