// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diracfc/funcalc.hpp"
#include "diracfc/gridops.hpp"
#include "diracfc/quadest.hpp"

namespace diracfc {

// Periodic graph y = g(x) sampled on a 1D grid.
struct LipschitzCurve {
  GridSpec grid;
  RealVector g;
  RealVector gPrime;  // central differences, matching the Cauchy operator's D
  double lipschitz = 0.0;
  double omega = 0.0;  // arctan(lipschitz)

  static LipschitzCurve fromSamples(const GridSpec& grid, const RealVector& g);
};

struct CauchyResult {
  Matrix viaEigen;
  Matrix viaQuadrature;
  double routeDiscrepancy = 0.0;  // ||viaEigen - viaQuadrature||
  double squareDefect = 0.0;      // ||C^2 - (I - P0)||
  Index kernelDimension = 0;
  std::vector<Complex> nearZeroEigenvalues;  // nonzero but below 1e-6 of the spectral radius
  bool illConditioned = false;
};

// C = sgn(i a D) with a = (1 + i g')^{-1} and D the central difference.
CauchyResult cauchyOperator(const LipschitzCurve& curve);

// max over Fourier modes of ||C e - sigma e|| / ||e|| with sigma = -sgn(sin(xi h)),
// the symbol of the flat operator on the central-difference grid.
double flatSymbolDefect(const Matrix& c, const GridSpec& grid);

struct KatoResult {
  double cLow = 0.0;   // min ||S u|| / ||grad u|| over u orthogonal to constants
  double cHigh = 0.0;
  double coefficientOmega = 0.0;
  double spectralAngle = 0.0;  // of the block operator
  Matrix sqrtOperator;         // S on scalar fields
};

// S = (-div A grad)^{1/2} from the block triple {grad, I, A}.
KatoResult katoSqrt(const MatrixField& a);

// Random accretive n x n field, constant on each of cells^n coarse cells.
MatrixField piecewiseAccretiveField(const GridSpec& grid, int cells, double targetOmega, std::uint64_t seed);

struct NormEquivalence {
  // (||Gamma u||^2 + ||Gamma^*_B u||^2)^{1/2} / ||sqrt(Pi^2) u|| over u orthogonal to N(Pi)
  double pairLow = 0.0;
  double pairHigh = 0.0;
  // ||Pi u|| / ||sqrt(Pi^2) u||
  double piLow = 0.0;
  double piHigh = 0.0;
  // (||Gamma u|| + ||Gamma^*_B u||) / ||sqrt(Pi^2) u|| lies in [sumLow, sumHigh]
  double sumLow = 0.0;
  double sumHigh = 0.0;
};

NormEquivalence normEquivalence(const PiBSystem& sys);

struct FormsReport {
  HypothesisReport hypotheses;
  Index kernelDimension = 0;
  NormEquivalence equivalence;
  QuadRatio quad;
};

// D_B = d + B^{-1} d^* B on the full form bundle.
FormsReport hodgeDiracForms(const MatrixField& b, const TGrid& tgrid);

struct LipschitzSample {
  double scale = 0.0;
  double perturbationNorm = 0.0;  // s (||A1|| + ||A2||), or s ||h|| for metrics
  double difference = 0.0;        // ||f(Pi_{B+sA}) - f(Pi_B)||
  double ratio = 0.0;
  double h3Residual = 0.0;
  bool skipped = false;
  std::string note;
};

struct LipschitzReport {
  std::string function;
  std::vector<LipschitzSample> samples;
  double maxRatio = 0.0;
  double limitSpread = 0.0;        // relative gap between the ratios at the two smallest kept scales
  double secondDifference = 0.0;   // ||F(s) - 2F(0) + F(-s)|| / s^2 at the smallest kept scale
};

// Scales are processed in the given order; a scale whose perturbed multipliers
// lose more than half of the base accretivity on the ranges is skipped.
LipschitzReport lipschitzFunCalc(const Triple& base, const LinearOperator& a1, const LinearOperator& a2,
                                 const HoloFunction& f, const std::vector<double>& scales);

// sup_u int ||(Q_t(Pi_{B+sA}) - Q_t(Pi_B)) u||^2 dt/t / (s^2 (||A1|| + ||A2||)^2 ||u||^2)
double quadraticLipschitzConstant(const Triple& base, const LinearOperator& a1, const LinearOperator& a2, double scale,
                                  const TGrid& tgrid);

// Symmetric perturbation of the flat cotangent metric.
struct MetricPerturbation {
  GridSpec grid;
  std::vector<RealMatrix> h;
  double hNorm = 0.0;  // max pointwise spectral norm

  static MetricPerturbation fromField(const GridSpec& grid, std::vector<RealMatrix> h);
  static MetricPerturbation random(const GridSpec& grid, double hNorm, std::uint64_t seed);
  MetricPerturbation scaled(double s) const;
};

// I + A with ((I + A)u, v) = (u, v)_{I + h} on the full form bundle,
// volume density included.
MatrixField metricMultiplier(const MetricPerturbation& h);

// Compares f(D_{g+sh}) with f(D_g) for f in {xi+, xi-, sgn}. Throws
// PreconditionError unless ||h|| < 1/4.
std::vector<LipschitzReport> metricPerturb(const MetricPerturbation& h, const std::vector<double>& scales);

}  // namespace diracfc
