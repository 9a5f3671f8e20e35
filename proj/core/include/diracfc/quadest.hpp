// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "diracfc/funcalc.hpp"
#include "diracfc/gridops.hpp"

namespace diracfc {

// Log-spaced nodes on [tMin, tMax]; weights integrate dt/t.
struct TGrid {
  double tMin = 1e-4;
  double tMax = 1e4;
  int count = 400;

  void validate() const;
  std::vector<double> nodes() const;
  // Trapezoid in log t. Both ends carry the trapezoid sum of a t^{+-2} tail,
  // which is how every integrand used here decays.
  std::vector<double> weights() const;
  double decades() const;
  TGrid refined() const;  // twice the node density
  static TGrid automatic(double piNorm);  // [1e-4, 1e4] / ||Pi||, 400 nodes
  // [1e-4 / max|lambda|, 1e4 / min|lambda|] over the nonzero spectrum, 50 nodes per decade.
  static TGrid automatic(const Matrix& pi);
};

struct QuadValue {
  double value = 0.0;
  double tailBound = 0.0;  // from the spectral extremes, assuming a normal operator
  bool truncationWarning = false;
};

// int_0^inf ||Q_t u||^2 dt/t
QuadValue quadFunctional(const Matrix& pi, const Vector& u, const TGrid& grid);

struct QuadRatio {
  double lower = 0.0;
  double upper = 0.0;
  Index rangeDimension = 0;
};

// Extreme values of int ||psi(tPi) u||^2 dt/t over unit u in R(Pi).
// Without psi the kernel is Q_t; a rational psi is evaluated as p(tPi) q(tPi)^{-1}.
QuadRatio quadRatio(const Matrix& pi, const TGrid& grid, const std::optional<HoloFunction>& psi = std::nullopt);

struct QuadRatioSample {
  double targetOmega = 0.0;
  double measuredOmega = 0.0;
  QuadRatio ratio;
};

// Random accretive forms triples on the given grid, one per angle.
std::vector<QuadRatioSample> quadRatioSweep(const GridSpec& grid, const std::vector<double>& omegas, const TGrid& tgrid,
                                            std::uint64_t seed);

struct ResolutionCheck {
  double defect = 0.0;  // ||sum w Q_t^2 - (I - P0)/2||
  double tailBound = 0.0;
  bool truncationWarning = false;
};

ResolutionCheck resolutionIdentityCheck(const Matrix& pi, const Matrix& p0, const TGrid& grid);

// Level j of the dyadic cubes used at scale t: side h 2^j with h 2^{j-1} < t <= h 2^j.
int dyadicLevel(const GridSpec& grid, double t);
Vector dyadicAverage(const Space& space, const Vector& u, double t);

struct PrincipalPart {
  MatrixField gamma;           // gamma_t(x) w = (Theta_t w)(x) for constant w
  double localL2Max = 0.0;     // max over cubes Q at scale t of mean_Q |gamma_t|^2
  double averagedNorm = 0.0;   // ||gamma_t A_t||
};

PrincipalPart principalPart(const PiBSystem& sys, double t);

// |gamma_t(x)|^2 on a log grid whose box tops h 2^j are nodes.
struct CarlesonData {
  Space space;
  std::vector<double> t;                    // ascending, last node = L
  double logStep = 0.0;
  std::vector<std::vector<double>> gammaSq; // [node][point]
  std::vector<std::vector<double>> boxWeights;  // [level][node], integrates dt/t over (0, h 2^level]
};

CarlesonData carlesonData(const PiBSystem& sys, const TGrid& density);

struct CarlesonResult {
  double norm = 0.0;                  // sup_Q mu(R_Q) / |Q|
  std::vector<double> levelMaxima;    // per dyadic level
  std::vector<std::vector<double>> cubeMasses;  // [level][cube], mass / |Q|
};

CarlesonResult carlesonNorm(const CarlesonData& data);
CarlesonResult carlesonNorm(const PiBSystem& sys, const TGrid& density);

struct EmbeddingCheck {
  double lhs = 0.0;        // int int_{t <= L} |A_t u|^2 |gamma_t|^2 dx dt/t
  double carleson = 0.0;
  double uNormSq = 0.0;
  double constant = 0.0;   // lhs / (carleson ||u||^2)
};

EmbeddingCheck carlesonEmbedding(const CarlesonData& data, const CarlesonResult& norm, const Vector& u);

enum class OffDiagFamily { R, P, Q, Theta };

struct OffDiagRow {
  double t = 0.0;
  double separationRatio = 0.0;  // d / t
  double ratio = 0.0;            // ||1_E U_t 1_F||
};

struct OffDiagResult {
  std::vector<OffDiagRow> rows;
  std::vector<double> slopes;  // d log(ratio) / d log(d/t) between consecutive rows at equal t
  bool saturated = false;      // some t was too large for the torus to show decay
};

// F is the dyadic cube at the origin of scale t, E the points at distance >= d from F.
OffDiagResult offDiagProbe(const PiBSystem& sys, OffDiagFamily family, const std::vector<double>& ts,
                           const std::vector<double>& separationRatios);

struct DyadicCube {
  int level = 0;
  std::array<int, kMaxDimension> corner{};  // grid indices, multiples of 2^level
};

struct FwqResult {
  double norm = 0.0;            // ||f||
  double boxIntegral = 0.0;     // int int_{R_Q} |Theta_t f|^2 dx dt/t
  double meanDefect = 0.0;      // |mean_Q f - w|
  double cubeMeasure = 0.0;     // |Q|
  double normRatio = 0.0;       // ||f|| / |Q|^{1/2}
  double boxRatio = 0.0;        // eps^2 boxIntegral / |Q|
  double meanRatio = 0.0;       // meanDefect / eps^{1/2}
};

// f = w_Q - eps l i Gamma (I + eps l i Pi_B)^{-1} w_Q with w_Q = eta_Q w, eta_Q = 1 on 2Q, 0 off 4Q.
FwqResult testFunctionFwq(const PiBSystem& sys, const DyadicCube& cube, const Vector& w, double eps);

}  // namespace diracfc
