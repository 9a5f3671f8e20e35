// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diracfc/gridops.hpp"
#include "diracfc/types.hpp"

namespace diracfc {

// min(|arg z|, pi - |arg z|): angle to the real axis.
double angleFromReal(Complex z);

// Closed double sector {|arg(+-z)| <= omega} together with an opening mu > omega.
struct Sector {
  double omega = 0.0;
  double mu = kPi / 2.0;

  bool contains(Complex z, double slack = 0.0) const;
  double distance(Complex tau) const;
};

enum class FunctionKind { Rational, Sgn, XiPlus, XiMinus, SqrtSquare, ExpDecay };

class HoloFunction {
 public:
  // Coefficients in ascending powers.
  static HoloFunction rational(std::vector<Complex> numerator, std::vector<Complex> denominator);
  static HoloFunction sgn() { return HoloFunction(FunctionKind::Sgn); }
  static HoloFunction xiPlus() { return HoloFunction(FunctionKind::XiPlus); }
  static HoloFunction xiMinus() { return HoloFunction(FunctionKind::XiMinus); }
  static HoloFunction sqrtSquare() { return HoloFunction(FunctionKind::SqrtSquare); }
  static HoloFunction expDecay() { return HoloFunction(FunctionKind::ExpDecay); }  // z exp(-sqrt(z^2))

  FunctionKind kind() const { return kind_; }
  Complex operator()(Complex z) const;
  // Value attached to the kernel.
  Complex atZero() const { return f0_; }
  HoloFunction withValueAtZero(Complex f0) const;
  // Holomorphic on S_mu with polynomial decay at 0 and at infinity.
  bool isPsiClass(double mu) const;
  // Branch line on the imaginary axis.
  bool cutsImaginaryAxis() const { return kind_ != FunctionKind::Rational; }
  std::string name() const;

  const std::vector<Complex>& numerator() const { return num_; }
  const std::vector<Complex>& denominator() const { return den_; }

 private:
  explicit HoloFunction(FunctionKind kind) : kind_(kind) {}
  FunctionKind kind_;
  std::vector<Complex> num_;
  std::vector<Complex> den_;
  Complex f0_ = 0.0;
};

// Four rays +-r e^{+-i theta}, r in [rMin, rMax], trapezoid rule in log r.
struct ContourSpec {
  double theta = 0.0;
  double rMin = 0.0;
  double rMax = 0.0;
  int nodesPerRay = 0;

  void validate() const;
  static ContourSpec defaults(const Sector& sector, double scale);
  // Places theta midway between the spectrum and the imaginary axis and
  // picks the node spacing from that gap.
  static ContourSpec automatic(const Matrix& pi);
};

struct QuadratureNode {
  double abscissa = 0.0;  // log r or log s
  double weight = 0.0;
  double termNorm = 0.0;  // Frobenius norm of the weighted term
};

struct FunCalcResult {
  Matrix value;
  double residualEstimate = 0.0;  // relative
  std::vector<QuadratureNode> nodes;
};

// (I + tau Pi)^{-1}
Matrix resolvent(const Matrix& pi, Complex tau);
// Dense LU below 4096 unknowns, otherwise BiCGSTAB/ILUT with a sparse LU fallback.
Vector resolventApply(const LinearOperator& pi, Complex tau, const Vector& u);

struct ResolventFamily {
  Matrix rPlus;   // R_t  = (I + itPi)^{-1}
  Matrix rMinus;  // R_-t
  Matrix p;       // (I + t^2 Pi^2)^{-1}
  Matrix q;       // t Pi (I + t^2 Pi^2)^{-1}
  Matrix theta;   // t Gamma^*_B P_t
  double identityDefect = 0.0;  // ||P_t - R_t R_-t|| / max(1, ||P_t||)
};

ResolventFamily familyRPQTheta(const PiBSystem& sys, double t);

FunCalcResult contourPsi(const Matrix& pi, const HoloFunction& psi, const ContourSpec& spec);

// Eigenvector route. Clusters of equal eigenvalues get a basis from the null
// space of (Pi - lambda I) when the raw eigenvectors are ill conditioned.
class SpectralDecomposition {
 public:
  static SpectralDecomposition compute(const Matrix& pi);

  Matrix evaluate(const HoloFunction& f, const std::optional<Sector>& sector = std::nullopt) const;
  const Vector& eigenvalues() const { return values_; }
  double condition() const { return condition_; }
  Index kernelDimension() const;
  double scale() const { return scale_; }
  double zeroTolerance() const { return 1e-10 * scale_; }

 private:
  Vector values_;
  Matrix vectors_;
  Matrix inverse_;
  double condition_ = 1.0;
  double scale_ = 0.0;
};

Matrix eigenOracle(const Matrix& pi, const HoloFunction& f, const std::optional<Sector>& sector = std::nullopt);

// Rational psi evaluated as p(Pi) q(Pi)^{-1}.
Matrix rationalOf(const Matrix& pi, const HoloFunction& f);

struct SGrid {
  double sMin = 1e-4;
  double sMax = 1e4;
  int count = 200;

  void validate() const;
  static SGrid automatic(const Matrix& pi);
};

// sgn(Pi) = (2/pi) int_0^inf Pi (I + s^2 Pi^2)^{-1} ds, trapezoid in log s with
// exponential tail weights at both ends.
FunCalcResult sgnViaResolventQuadrature(const Matrix& pi, const SGrid& grid);

struct SectorProbeResult {
  double constant = 0.0;  // max ||(I + tau Pi)^{-1}|| dist(tau, S_omega) / |tau|
  Complex worstTau = 0.0;
  int samples = 0;
};

std::vector<Complex> sectorSamples(double omega, double scale, int angles = 6, int radii = 5);
SectorProbeResult sectorProbe(const Matrix& pi, double omega, const std::vector<Complex>& taus);

}  // namespace diracfc
