// SPDX-License-Identifier: Apache-2.0
#include "diracfc/apps.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "diracfc/errors.hpp"
#include "diracfc/hodge.hpp"
#include "diracfc/linalg.hpp"
#include "diracfc/parallel.hpp"

namespace diracfc {

namespace {

Matrix onesComplement(Index points) {
  const Matrix ones = Matrix::Constant(points, 1, 1.0 / std::sqrt(static_cast<double>(points)));
  return linalg::orthogonalComplement(ones, points);
}

// sqrt of the extreme generalized eigenvalues of (X Y)^*(X Y) against (Z Y)^*(Z Y).
linalg::Extremes gainExtremes(const Matrix& xy, const Matrix& zy) {
  const Matrix h = xy.adjoint() * xy;
  const Matrix g = zy.adjoint() * zy;
  const auto e = linalg::generalizedExtremes(0.5 * (h + h.adjoint()), 0.5 * (g + g.adjoint()));
  return {std::sqrt(std::max(0.0, e.low)), std::sqrt(std::max(0.0, e.high))};
}

Matrix qKernel(const Matrix& pi, double t) {
  Matrix a = (t * t) * (pi * pi);
  a.diagonal().array() += 1.0;
  return t * a.partialPivLu().solve(pi);
}

Triple perturbed(const Triple& base, const LinearOperator& a1, const LinearOperator& a2, double s) {
  return {base.gamma, base.b1 + a1.scaled(s), base.b2 + a2.scaled(s)};
}

// Accretivity of B1 on R(Gamma^*) and of B2 on R(Gamma).
struct RangeBases {
  Matrix adjointRange;
  Matrix range;
};

RangeBases rangeBases(const Triple& t) {
  const Matrix g = t.gamma.dense();
  return {linalg::rangeBasis(g.adjoint()).basis, linalg::rangeBasis(g).basis};
}

double rangeKappa(const RangeBases& r, const Triple& t) {
  double k = std::numeric_limits<double>::infinity();
  if (r.adjointRange.cols() > 0)
    k = std::min(k, linalg::numericalRange(r.adjointRange.adjoint() * t.b1.dense() * r.adjointRange, 32).kappa);
  if (r.range.cols() > 0) k = std::min(k, linalg::numericalRange(r.range.adjoint() * t.b2.dense() * r.range, 32).kappa);
  return k;
}

double h3Residual(const Triple& t) {
  const Matrix gs = t.gamma.dense().adjoint();
  return linalg::opNorm(gs * t.b2.dense() * t.b1.dense() * gs);
}

void summarize(LipschitzReport& r) {
  std::vector<const LipschitzSample*> kept;
  for (const auto& s : r.samples) {
    if (s.skipped) continue;
    r.maxRatio = std::max(r.maxRatio, s.ratio);
    kept.push_back(&s);
  }
  std::sort(kept.begin(), kept.end(), [](auto* a, auto* b) { return a->scale < b->scale; });
  if (kept.size() >= 2) {
    const double a = kept[0]->ratio, b = kept[1]->ratio;
    const double top = std::max(std::abs(a), std::abs(b));
    r.limitSpread = top > 0.0 ? std::abs(a - b) / top : 0.0;
  }
}

}  // namespace

LipschitzCurve LipschitzCurve::fromSamples(const GridSpec& grid, const RealVector& g) {
  grid.validate();
  if (grid.n != 1) throw ArgumentError("curves live on a 1D grid");
  if (g.size() != grid.m) throw ArgumentError("curve needs one sample per grid point");
  if (!g.allFinite()) throw ArgumentError("curve samples must be finite");
  LipschitzCurve c{grid, g, RealVector(grid.m), 0.0, 0.0};
  const double h = grid.spacing();
  for (int i = 0; i < grid.m; ++i) c.gPrime(i) = (g((i + 1) % grid.m) - g((i + grid.m - 1) % grid.m)) / (2.0 * h);
  c.lipschitz = c.gPrime.cwiseAbs().maxCoeff();
  c.omega = std::atan(c.lipschitz);
  return c;
}

CauchyResult cauchyOperator(const LipschitzCurve& curve) {
  const GridSpec& grid = curve.grid;
  const Matrix d = buildCentralDerivative(grid).dense();
  Vector a(grid.m);
  for (int i = 0; i < grid.m; ++i) a(i) = 1.0 / Complex(1.0, curve.gPrime(i));
  const Matrix pi = kI * (a.asDiagonal() * d);

  CauchyResult out;
  const auto dec = SpectralDecomposition::compute(pi);
  out.viaEigen = dec.evaluate(HoloFunction::sgn());
  out.viaQuadrature = sgnViaResolventQuadrature(pi, SGrid::automatic(pi)).value;
  out.routeDiscrepancy = linalg::opNorm(out.viaEigen - out.viaQuadrature);
  out.kernelDimension = dec.kernelDimension();
  const Matrix p0 = kernelProjection(pi);
  const Index n = pi.rows();
  out.squareDefect = linalg::opNorm(out.viaEigen * out.viaEigen - (Matrix::Identity(n, n) - p0));
  for (Index i = 0; i < dec.eigenvalues().size(); ++i) {
    const double r = std::abs(dec.eigenvalues()(i));
    if (r > dec.zeroTolerance() && r < 1e-6 * dec.scale()) out.nearZeroEigenvalues.push_back(dec.eigenvalues()(i));
  }
  out.illConditioned = !out.nearZeroEigenvalues.empty();
  return out;
}

double flatSymbolDefect(const Matrix& c, const GridSpec& grid) {
  if (grid.n != 1 || c.rows() != grid.m || c.cols() != grid.m) throw ArgumentError("symbol check needs a 1D operator");
  const double h = grid.spacing();
  double worst = 0.0;
  for (int k = 0; k < grid.m; ++k) {
    const int freq = k <= grid.m / 2 ? k : k - grid.m;
    const double xi = 2.0 * kPi * freq / grid.length;
    Vector e(grid.m);
    for (int j = 0; j < grid.m; ++j) e(j) = std::polar(1.0, xi * j * h);
    const double s = std::sin(xi * h);
    const double sigma = std::abs(s) < 1e-12 ? 0.0 : (s > 0.0 ? -1.0 : 1.0);
    worst = std::max(worst, (c * e - sigma * e).norm() / e.norm());
  }
  return worst;
}

KatoResult katoSqrt(const MatrixField& a) {
  const GridSpec& grid = a.grid;
  grid.validate();
  if (a.dim != grid.n) throw ArgumentError("coefficient field must be n x n");
  KatoResult out;
  double kappa = std::numeric_limits<double>::infinity();
  for (Index p = 0; p < grid.points(); ++p) {
    const auto r = linalg::numericalRange(a.at(p), 32);
    kappa = std::min(kappa, r.kappa);
    out.coefficientOmega = std::max(out.coefficientOmega, r.omega);
  }
  if (!(kappa > 0.0)) throw ArgumentError("coefficient field is not accretive");

  const LinearOperator grad = buildGradient(grid);
  const PiBSystem sys = buildPiB(buildBlockTriple(grad, MatrixField::identity(grid, 1), a));
  const Matrix pi = sys.piB.dense();
  const auto dec = SpectralDecomposition::compute(pi);
  out.spectralAngle = linalg::spectralAngle(dec.eigenvalues(), dec.zeroTolerance());
  const double omega = out.coefficientOmega;
  const Sector sector{omega, omega + 0.1 * (kPi / 2.0 - omega)};
  const Index points = grid.points();
  out.sqrtOperator = dec.evaluate(HoloFunction::sqrtSquare(), sector).topLeftCorner(points, points);

  const Matrix y = onesComplement(points);
  const auto e = gainExtremes(out.sqrtOperator * y, grad.dense() * y);
  out.cLow = e.low;
  out.cHigh = e.high;
  return out;
}

MatrixField piecewiseAccretiveField(const GridSpec& grid, int cells, double targetOmega, std::uint64_t seed) {
  grid.validate();
  if (cells < 1 || grid.m % cells != 0) throw ArgumentError("cell count must divide m");
  const GridSpec coarse{grid.n, cells, grid.length};
  const MatrixField c = randomAccretiveField(coarse, grid.n, targetOmega, seed);
  const int ratio = grid.m / cells;
  MatrixField f = MatrixField::identity(grid, grid.n);
  for (Index p = 0; p < grid.points(); ++p) {
    auto x = grid.coords(p);
    for (int k = 0; k < grid.n; ++k) x[static_cast<std::size_t>(k)] /= ratio;
    f.at(p) = c.at(coarse.point(x));
  }
  return f;
}

NormEquivalence normEquivalence(const PiBSystem& sys) {
  const Matrix pi = sys.piB.dense();
  const Index n = pi.rows();
  const Matrix s = eigenOracle(pi, HoloFunction::sqrtSquare());
  const Matrix y = linalg::orthogonalComplement(linalg::nullBasis(pi).basis, n);
  NormEquivalence out;
  if (y.cols() == 0) return out;
  const Matrix sy = s * y;
  Matrix stacked(2 * n, y.cols());
  stacked << sys.gamma.dense() * y, sys.gammaStarB.dense() * y;
  const auto pair = gainExtremes(stacked, sy);
  const auto viaPi = gainExtremes(pi * y, sy);
  out.pairLow = pair.low;
  out.pairHigh = pair.high;
  out.piLow = viaPi.low;
  out.piHigh = viaPi.high;
  // a + b lies between (a^2 + b^2)^{1/2} and sqrt(2) (a^2 + b^2)^{1/2}.
  out.sumLow = pair.low;
  out.sumHigh = std::sqrt(2.0) * pair.high;
  return out;
}

FormsReport hodgeDiracForms(const MatrixField& b, const TGrid& tgrid) {
  const GridSpec& grid = b.grid;
  grid.validate();
  if (b.dim != FiberLayout::forms(grid.n).dim()) throw ArgumentError("B must act on the full form bundle");
  double smallest = std::numeric_limits<double>::infinity(), largest = 0.0;
  for (const auto& m : b.values) {
    Eigen::JacobiSVD<Matrix> svd(m);
    smallest = std::min(smallest, svd.singularValues().minCoeff());
    largest = std::max(largest, svd.singularValues().maxCoeff());
  }
  if (!(smallest > 1e-12 * largest)) throw ArgumentError("B is not invertible");

  const Triple triple = formsTriple(grid, b.inverse(), b);
  const PiBSystem sys = buildPiB(triple);
  FormsReport out;
  out.hypotheses = validateHypotheses(triple);
  const Matrix pi = sys.piB.dense();
  out.kernelDimension = linalg::nullBasis(pi).basis.cols();
  out.equivalence = normEquivalence(sys);
  out.quad = quadRatio(pi, tgrid);
  return out;
}

LipschitzReport lipschitzFunCalc(const Triple& base, const LinearOperator& a1, const LinearOperator& a2,
                                 const HoloFunction& f, const std::vector<double>& scales) {
  if (a1.domain() != base.space() || a2.domain() != base.space()) throw ArgumentError("perturbations act on another space");
  const double size = linalg::opNorm(a1.dense()) + linalg::opNorm(a2.dense());
  const RangeBases ranges = rangeBases(base);
  const double kappa0 = rangeKappa(ranges, base);
  if (!(kappa0 > 0.0)) throw PreconditionError("base multipliers are not accretive on the ranges");

  auto evaluate = [&](const Triple& t) { return eigenOracle(buildPiB(t).piB.dense(), f); };
  const Matrix f0 = evaluate(base);

  LipschitzReport out;
  out.function = f.name();
  out.samples.resize(scales.size());
  parallelFor(static_cast<Index>(scales.size()), [&](Index i) {
    auto& sample = out.samples[static_cast<std::size_t>(i)];
    const double s = scales[static_cast<std::size_t>(i)];
    sample.scale = s;
    sample.perturbationNorm = s * size;
    const Triple t = perturbed(base, a1, a2, s);
    if (rangeKappa(ranges, t) < 0.5 * kappa0) {
      sample.skipped = true;
      sample.note = "accretivity margin lost";
      return;
    }
    sample.h3Residual = h3Residual(t);
    sample.difference = linalg::opNorm(evaluate(t) - f0);
    sample.ratio = sample.perturbationNorm > 0.0 ? sample.difference / sample.perturbationNorm : 0.0;
  });
  summarize(out);

  const LipschitzSample* smallest = nullptr;
  for (const auto& s : out.samples)
    if (!s.skipped && s.scale > 0.0 && (!smallest || s.scale < smallest->scale)) smallest = &s;
  if (smallest) {
    const double s = smallest->scale;
    const Triple minus = perturbed(base, a1, a2, -s);
    if (rangeKappa(ranges, minus) >= 0.5 * kappa0)
      out.secondDifference = linalg::opNorm(evaluate(perturbed(base, a1, a2, s)) - 2.0 * f0 + evaluate(minus)) / (s * s);
  }
  return out;
}

double quadraticLipschitzConstant(const Triple& base, const LinearOperator& a1, const LinearOperator& a2, double scale,
                                  const TGrid& tgrid) {
  if (!(scale > 0.0)) throw ArgumentError("scale must be positive");
  const double size = linalg::opNorm(a1.dense()) + linalg::opNorm(a2.dense());
  if (size == 0.0) return 0.0;
  const Matrix pi0 = buildPiB(base).piB.dense();
  const Matrix pi1 = buildPiB(perturbed(base, a1, a2, scale)).piB.dense();
  const auto t = tgrid.nodes();
  const auto w = tgrid.weights();
  const Index n = pi0.rows();
  const Matrix m = orderedSum(static_cast<Index>(t.size()), Matrix(Matrix::Zero(n, n)), [&](Index k) {
    const double tk = t[static_cast<std::size_t>(k)];
    const Matrix d = qKernel(pi1, tk) - qKernel(pi0, tk);
    return Matrix(w[static_cast<std::size_t>(k)] * (d.adjoint() * d));
  });
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(n - 1) / (scale * scale * size * size);
}

MetricPerturbation MetricPerturbation::fromField(const GridSpec& grid, std::vector<RealMatrix> h) {
  grid.validate();
  if (static_cast<Index>(h.size()) != grid.points()) throw ArgumentError("metric perturbation needs one matrix per point");
  MetricPerturbation out{grid, std::move(h), 0.0};
  for (const auto& m : out.h) {
    if (m.rows() != grid.n || m.cols() != grid.n) throw ArgumentError("metric perturbation must be n x n");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
      throw ArgumentError("metric perturbation must be symmetric");
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
    out.hNorm = std::max(out.hNorm, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return out;
}

MetricPerturbation MetricPerturbation::random(const GridSpec& grid, double hNorm, std::uint64_t seed) {
  grid.validate();
  if (!(hNorm >= 0.0)) throw ArgumentError("hNorm must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<RealMatrix> h(static_cast<std::size_t>(grid.points()));
  for (auto& m : h) {
    m = RealMatrix(grid.n, grid.n);
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j) m(i, j) = normal(rng);
    m = 0.5 * (m + m.transpose()).eval();
  }
  auto raw = fromField(grid, h);
  return raw.hNorm > 0.0 ? raw.scaled(hNorm / raw.hNorm) : raw;
}

MetricPerturbation MetricPerturbation::scaled(double s) const {
  MetricPerturbation out = *this;
  for (auto& m : out.h) m *= s;
  out.hNorm *= std::abs(s);
  return out;
}

MatrixField metricMultiplier(const MetricPerturbation& h) {
  const GridSpec& grid = h.grid;
  MatrixField out = MatrixField::identity(grid, FiberLayout::forms(grid.n).dim());
  for (Index p = 0; p < grid.points(); ++p) {
    const RealMatrix g = RealMatrix::Identity(grid.n, grid.n) + h.h[static_cast<std::size_t>(p)];
    // Cotangent Gram G has volume density det(G)^{-1/2}.
    const double density = 1.0 / std::sqrt(g.determinant());
    out.at(p) = density * gramOnForms(g.cast<Complex>()).full();
  }
  return out;
}

std::vector<LipschitzReport> metricPerturb(const MetricPerturbation& h, const std::vector<double>& scales) {
  auto check = [](double norm) {
    if (!(norm < 0.25))
      throw PreconditionError("metric perturbation needs ||h|| < 1/4, got " + std::to_string(norm));
  };
  check(h.hNorm);
  for (double s : scales) check(std::abs(s) * h.hNorm);

  const std::vector<HoloFunction> functions{HoloFunction::xiPlus(), HoloFunction::xiMinus(), HoloFunction::sgn()};
  const Sector sector{0.0, std::acos(0.25)};
  auto evaluateAll = [&](const MetricPerturbation& hs) {
    const MatrixField b = metricMultiplier(hs);
    const auto dec = SpectralDecomposition::compute(buildPiB(formsTriple(hs.grid, b.inverse(), b)).piB.dense());
    std::vector<Matrix> values;
    for (const auto& f : functions) values.push_back(dec.evaluate(f, sector));
    return values;
  };
  const auto base = evaluateAll(h.scaled(0.0));

  std::vector<std::vector<Matrix>> perturbedValues(scales.size());
  parallelFor(static_cast<Index>(scales.size()),
              [&](Index i) { perturbedValues[static_cast<std::size_t>(i)] = evaluateAll(h.scaled(scales[static_cast<std::size_t>(i)])); });

  std::vector<LipschitzReport> out(functions.size());
  for (std::size_t f = 0; f < functions.size(); ++f) {
    out[f].function = functions[f].name();
    for (std::size_t i = 0; i < scales.size(); ++i) {
      LipschitzSample s;
      s.scale = scales[i];
      s.perturbationNorm = std::abs(scales[i]) * h.hNorm;
      s.difference = linalg::opNorm(perturbedValues[i][f] - base[f]);
      s.ratio = s.perturbationNorm > 0.0 ? s.difference / s.perturbationNorm : 0.0;
      out[f].samples.push_back(s);
    }
    summarize(out[f]);
  }

  const auto smallest = std::min_element(scales.begin(), scales.end(),
                                         [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (smallest != scales.end() && *smallest != 0.0) {
    const double s = std::abs(*smallest);
    const auto plus = evaluateAll(h.scaled(s));
    const auto minus = evaluateAll(h.scaled(-s));
    for (std::size_t f = 0; f < functions.size(); ++f)
      out[f].secondDifference = linalg::opNorm(plus[f] - 2.0 * base[f] + minus[f]) / (s * s);
  }
  return out;
}

}  // namespace diracfc
