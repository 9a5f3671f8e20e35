// SPDX-License-Identifier: Apache-2.0
#include "diracfc/quadest.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

#include "diracfc/errors.hpp"
#include "diracfc/linalg.hpp"
#include "diracfc/parallel.hpp"

namespace diracfc {

namespace {

// Trapezoid sum of e^{-rate x} over [0, inf) with step h and half weight at 0.
double exponentialTailWeight(double h, double rate) { return 0.5 * h / std::tanh(0.5 * rate * h); }

struct Spectrum {
  double largest = 0.0;
  double smallest = 0.0;
};

Spectrum spectralExtremes(const Matrix& pi) {
  const Vector ev = linalg::eigenvalues(pi);
  Spectrum s;
  for (Index i = 0; i < ev.size(); ++i) s.largest = std::max(s.largest, std::abs(ev(i)));
  const double zeroTol = 1e-10 * std::max(s.largest, 1e-300);
  s.smallest = s.largest;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > zeroTol) s.smallest = std::min(s.smallest, std::abs(ev(i)));
  return s;
}

double tailBoundFor(const TGrid& g, const Spectrum& s) {
  if (s.largest == 0.0) return 0.0;
  return 0.5 * (std::pow(g.tMin * s.largest, 2) + std::pow(g.tMax * s.smallest, -2));
}

// t Pi (I + itPi)^{-1} (I - itPi)^{-1}. Forming I + t^2 Pi^2 instead loses the
// identity to rounding once t^2 ||Pi||^2 nears 1e16.
template <class Rhs>
auto qKernel(const Matrix& pi, double t, const Rhs& rhs) {
  const Index n = pi.rows();
  const Matrix plus = Matrix::Identity(n, n) + Complex(0.0, t) * pi;
  const Matrix minus = Matrix::Identity(n, n) - Complex(0.0, t) * pi;
  using Result = Eigen::Matrix<Complex, Eigen::Dynamic, Rhs::ColsAtCompileTime>;
  return Result(minus.partialPivLu().solve(Result(plus.partialPivLu().solve(t * (pi * rhs)))));
}

// (I + t^2 Pi^2)^{-1} B with a sparse factorization.
class ShiftedSolver {
 public:
  explicit ShiftedSolver(const LinearOperator& pi) : pi_(pi.toSparse()), pi2_(pi_ * pi_) {}

  Matrix solve(double t, const Matrix& rhs) const {
    SparseMatrix a = (t * t) * pi2_;
    SparseMatrix id(a.rows(), a.cols());
    id.setIdentity();
    a += id;
    a.makeCompressed();
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw SpectralCollision(Complex(0.0, t), "I + t^2 Pi^2 is singular");
    return lu.solve(rhs);
  }

 private:
  SparseMatrix pi_;
  SparseMatrix pi2_;
};

double fiberNormSq(const Matrix& g) {
  Eigen::JacobiSVD<Matrix> svd(g);
  const double s = svd.singularValues()(0);
  return s * s;
}

// Cube id of each point at level j.
std::vector<Index> cubeIds(const GridSpec& grid, int level, Index& cubeCount) {
  const int side = 1 << level;
  const int perAxis = grid.m / side;
  cubeCount = 1;
  for (int k = 0; k < grid.n; ++k) cubeCount *= perAxis;
  std::vector<Index> ids(static_cast<std::size_t>(grid.points()));
  for (Index p = 0; p < grid.points(); ++p) {
    const auto c = grid.coords(p);
    Index id = 0;
    for (int k = grid.n - 1; k >= 0; --k) id = id * perAxis + c[static_cast<std::size_t>(k)] / side;
    ids[static_cast<std::size_t>(p)] = id;
  }
  return ids;
}

Matrix thetaOnConstants(const PiBSystem& sys, const ShiftedSolver& solver, double t) {
  const Space& space = sys.space();
  const Index points = space.grid.points();
  const int nf = space.fiber.dim();
  Matrix w = Matrix::Zero(space.dim(), nf);
  for (int c = 0; c < nf; ++c) w.block(static_cast<Index>(c) * points, c, points, 1).setOnes();
  return t * (sys.gammaStarB.toSparse() * solver.solve(t, w));
}

Matrix fiberMatrix(const Matrix& theta, const Space& space, Index p) {
  const int nf = space.fiber.dim();
  Matrix g(nf, nf);
  for (int r = 0; r < nf; ++r)
    for (int c = 0; c < nf; ++c) g(r, c) = theta(space.index(p, r), c);
  return g;
}

}  // namespace

void TGrid::validate() const {
  if (!(tMin > 0.0 && tMax > tMin)) throw ArgumentError("t-grid needs 0 < tMin < tMax");
  if (count < 8) throw ArgumentError("t-grid needs at least 8 nodes");
}

std::vector<double> TGrid::nodes() const {
  validate();
  std::vector<double> t(static_cast<std::size_t>(count));
  const double a = std::log(tMin), h = (std::log(tMax) - a) / (count - 1);
  for (int k = 0; k < count; ++k) t[static_cast<std::size_t>(k)] = std::exp(a + k * h);
  return t;
}

std::vector<double> TGrid::weights() const {
  validate();
  const double h = std::log(tMax / tMin) / (count - 1);
  std::vector<double> w(static_cast<std::size_t>(count), h);
  const double end = 0.5 * h + exponentialTailWeight(h, 2.0);
  w.front() = w.back() = end;
  return w;
}

double TGrid::decades() const { return std::log10(tMax / tMin); }

TGrid TGrid::refined() const { return {tMin, tMax, 2 * count - 1}; }

TGrid TGrid::automatic(double piNorm) {
  const double s = piNorm > 0.0 ? piNorm : 1.0;
  return {1e-4 / s, 1e4 / s, 400};
}

TGrid TGrid::automatic(const Matrix& pi) {
  const Spectrum s = spectralExtremes(pi);
  if (s.largest == 0.0) return automatic(1.0);
  TGrid g{1e-4 / s.largest, 1e4 / s.smallest, 0};
  g.count = static_cast<int>(std::ceil(50.0 * g.decades())) + 1;
  return g;
}

QuadValue quadFunctional(const Matrix& pi, const Vector& u, const TGrid& grid) {
  if (u.size() != pi.rows()) throw ArgumentError("vector size does not match operator");
  const auto t = grid.nodes();
  const auto w = grid.weights();
  QuadValue out;
  out.value = orderedSum(static_cast<Index>(t.size()), 0.0, [&](Index k) {
    const Vector q = qKernel(pi, t[static_cast<std::size_t>(k)], u);
    return w[static_cast<std::size_t>(k)] * q.squaredNorm();
  });
  out.tailBound = tailBoundFor(grid, spectralExtremes(pi)) * u.squaredNorm();
  out.truncationWarning = grid.decades() < 2.0 || out.tailBound > 1e-3 * std::max(out.value, 1e-300);
  return out;
}

QuadRatio quadRatio(const Matrix& pi, const TGrid& grid, const std::optional<HoloFunction>& psi) {
  if (psi && psi->kind() != FunctionKind::Rational) throw ArgumentError("quadRatio evaluates rational functions only");
  const auto t = grid.nodes();
  const auto w = grid.weights();
  const Index n = pi.rows();
  const auto range = linalg::rangeBasis(pi);
  const Matrix& y = range.basis;
  const Matrix m = orderedSum(static_cast<Index>(t.size()), Matrix(Matrix::Zero(y.cols(), y.cols())), [&](Index k) {
    const double tk = t[static_cast<std::size_t>(k)];
    const Matrix qy = psi ? Matrix(rationalOf(tk * pi, *psi) * y) : Matrix(qKernel(pi, tk, y));
    return Matrix(w[static_cast<std::size_t>(k)] * (qy.adjoint() * qy));
  });
  QuadRatio out;
  out.rangeDimension = y.cols();
  if (y.cols() == 0) return out;
  (void)n;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  out.lower = es.eigenvalues()(0);
  out.upper = es.eigenvalues()(y.cols() - 1);
  return out;
}

std::vector<QuadRatioSample> quadRatioSweep(const GridSpec& grid, const std::vector<double>& omegas, const TGrid& tgrid,
                                            std::uint64_t seed) {
  std::vector<QuadRatioSample> out;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const auto b = randomAccretive(grid, FiberLayout::forms(grid.n), omegas[i], seed + i);
    const Triple triple = formsTriple(grid, b.b1, b.b2);
    QuadRatioSample s;
    s.targetOmega = omegas[i];
    s.measuredOmega = validateHypotheses(triple, 32).omega;
    s.ratio = quadRatio(buildPiB(triple).piB.dense(), tgrid);
    out.push_back(s);
  }
  return out;
}

ResolutionCheck resolutionIdentityCheck(const Matrix& pi, const Matrix& p0, const TGrid& grid) {
  const Index n = pi.rows();
  const auto t = grid.nodes();
  const auto w = grid.weights();
  const Matrix sum = orderedSum(static_cast<Index>(t.size()), Matrix(Matrix::Zero(n, n)), [&](Index k) {
    const Matrix q = qKernel(pi, t[static_cast<std::size_t>(k)], Matrix::Identity(n, n));
    return Matrix(w[static_cast<std::size_t>(k)] * (q * q));
  });
  ResolutionCheck out;
  out.defect = linalg::opNorm(sum - 0.5 * (Matrix::Identity(n, n) - p0));
  out.tailBound = tailBoundFor(grid, spectralExtremes(pi));
  out.truncationWarning = grid.decades() < 2.0 || out.tailBound > 1e-6;
  return out;
}

int dyadicLevel(const GridSpec& grid, double t) {
  const int top = grid.levels();
  if (!(t > 0.0) || t > grid.length * (1.0 + 1e-12)) throw ArgumentError("scale t must lie in (0, L]");
  int j = 0;
  while (j < top && t > grid.spacing() * std::ldexp(1.0, j) * (1.0 + 1e-12)) ++j;
  return j;
}

Vector dyadicAverage(const Space& space, const Vector& u, double t) {
  const GridSpec& grid = space.grid;
  if (u.size() != space.dim()) throw ArgumentError("vector does not match the space");
  const int level = dyadicLevel(grid, t);
  if (level == 0) return u;
  Index cubes = 0;
  const auto ids = cubeIds(grid, level, cubes);
  const double perCube = std::ldexp(1.0, level * grid.n);
  Vector out(u.size());
  for (int c = 0; c < space.fiber.dim(); ++c) {
    Vector sums = Vector::Zero(cubes);
    for (Index p = 0; p < grid.points(); ++p) sums(ids[static_cast<std::size_t>(p)]) += u(space.index(p, c));
    for (Index p = 0; p < grid.points(); ++p) out(space.index(p, c)) = sums(ids[static_cast<std::size_t>(p)]) / perCube;
  }
  return out;
}

PrincipalPart principalPart(const PiBSystem& sys, double t) {
  const Space& space = sys.space();
  const GridSpec& grid = space.grid;
  const int level = dyadicLevel(grid, t);
  const ShiftedSolver solver(sys.piB);
  const Matrix theta = thetaOnConstants(sys, solver, t);

  PrincipalPart out;
  out.gamma = MatrixField::identity(grid, space.fiber.dim());
  Index cubes = 0;
  const auto ids = cubeIds(grid, level, cubes);
  std::vector<double> massSq(static_cast<std::size_t>(cubes), 0.0);
  std::vector<Matrix> gram(static_cast<std::size_t>(cubes), Matrix::Zero(space.fiber.dim(), space.fiber.dim()));
  for (Index p = 0; p < grid.points(); ++p) {
    out.gamma.at(p) = fiberMatrix(theta, space, p);
    const auto id = static_cast<std::size_t>(ids[static_cast<std::size_t>(p)]);
    massSq[id] += fiberNormSq(out.gamma.at(p));
    gram[id] += out.gamma.at(p).adjoint() * out.gamma.at(p);
  }
  const double perCube = std::ldexp(1.0, level * grid.n);
  for (std::size_t q = 0; q < massSq.size(); ++q) {
    out.localL2Max = std::max(out.localL2Max, massSq[q] / perCube);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram[q] / perCube, Eigen::EigenvaluesOnly);
    out.averagedNorm = std::max(out.averagedNorm, std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1))));
  }
  return out;
}

CarlesonData carlesonData(const PiBSystem& sys, const TGrid& density) {
  density.validate();
  const Space& space = sys.space();
  const GridSpec& grid = space.grid;
  const int levels = grid.levels();
  const double octavesRequested = std::log2(density.tMax / density.tMin);
  const int perOctave = std::max(4, static_cast<int>(std::ceil((density.count - 1) / octavesRequested)));
  const double lowest = std::min(density.tMin, grid.spacing() / 16.0);
  const int octaves = static_cast<int>(std::ceil(std::log2(grid.length / lowest)));
  const int top = perOctave * octaves;  // index of t = L

  CarlesonData data;
  data.space = space;
  data.logStep = std::log(2.0) / perOctave;
  data.t.resize(static_cast<std::size_t>(top + 1));
  for (int k = 0; k <= top; ++k)
    data.t[static_cast<std::size_t>(k)] = grid.length * std::exp2(static_cast<double>(k - top) / perOctave);

  const ShiftedSolver solver(sys.piB);
  data.gammaSq.assign(data.t.size(), std::vector<double>(static_cast<std::size_t>(grid.points()), 0.0));
  parallelFor(static_cast<Index>(data.t.size()), [&](Index k) {
    const Matrix theta = thetaOnConstants(sys, solver, data.t[static_cast<std::size_t>(k)]);
    for (Index p = 0; p < grid.points(); ++p)
      data.gammaSq[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)] = fiberNormSq(fiberMatrix(theta, space, p));
  });

  const double h = data.logStep;
  data.boxWeights.assign(static_cast<std::size_t>(levels + 1), std::vector<double>(data.t.size(), 0.0));
  for (int j = 0; j <= levels; ++j) {
    const int kTop = top - perOctave * (levels - j);
    auto& w = data.boxWeights[static_cast<std::size_t>(j)];
    for (int k = 0; k <= kTop; ++k) w[static_cast<std::size_t>(k)] = h;
    w[static_cast<std::size_t>(kTop)] = 0.5 * h;
    // |gamma_t|^2 ~ t^2 below the first node.
    w[0] = 0.5 * h + exponentialTailWeight(h, 2.0);
  }
  return data;
}

CarlesonResult carlesonNorm(const CarlesonData& data) {
  const GridSpec& grid = data.space.grid;
  const int levels = grid.levels();
  CarlesonResult out;
  for (int j = 0; j <= levels; ++j) {
    const auto& w = data.boxWeights[static_cast<std::size_t>(j)];
    Index cubes = 0;
    const auto ids = cubeIds(grid, j, cubes);
    std::vector<double> mass(static_cast<std::size_t>(cubes), 0.0);
    for (std::size_t k = 0; k < data.t.size(); ++k) {
      if (w[k] == 0.0) continue;
      for (Index p = 0; p < grid.points(); ++p)
        mass[static_cast<std::size_t>(ids[static_cast<std::size_t>(p)])] += w[k] * data.gammaSq[k][static_cast<std::size_t>(p)];
    }
    const double perCube = std::ldexp(1.0, j * grid.n);
    double best = 0.0;
    for (double& m : mass) {
      m /= perCube;
      best = std::max(best, m);
    }
    out.levelMaxima.push_back(best);
    out.cubeMasses.push_back(std::move(mass));
    out.norm = std::max(out.norm, best);
  }
  return out;
}

CarlesonResult carlesonNorm(const PiBSystem& sys, const TGrid& density) { return carlesonNorm(carlesonData(sys, density)); }

EmbeddingCheck carlesonEmbedding(const CarlesonData& data, const CarlesonResult& norm, const Vector& u) {
  const Space& space = data.space;
  const GridSpec& grid = space.grid;
  const double cell = grid.cellVolume();
  const auto& w = data.boxWeights.back();
  EmbeddingCheck out;
  out.carleson = norm.norm;
  out.uNormSq = u.squaredNorm() * cell;
  for (std::size_t k = 0; k < data.t.size(); ++k) {
    const Vector avg = dyadicAverage(space, u, data.t[k]);
    double s = 0.0;
    for (Index p = 0; p < grid.points(); ++p) {
      double a = 0.0;
      for (int c = 0; c < space.fiber.dim(); ++c) a += std::norm(avg(space.index(p, c)));
      s += a * data.gammaSq[k][static_cast<std::size_t>(p)];
    }
    out.lhs += w[k] * s * cell;
  }
  const double denom = out.carleson * out.uNormSq;
  out.constant = denom > 0.0 ? out.lhs / denom : 0.0;
  return out;
}

OffDiagResult offDiagProbe(const PiBSystem& sys, OffDiagFamily family, const std::vector<double>& ts,
                           const std::vector<double>& separationRatios) {
  const Space& space = sys.space();
  const GridSpec& grid = space.grid;
  const Matrix pi = sys.piB.dense();
  const int nf = space.fiber.dim();
  OffDiagResult out;
  for (double t : ts) {
    if (t > grid.length / 4.0) out.saturated = true;
    const int level = dyadicLevel(grid, std::min(t, grid.length));
    const int side = 1 << level;
    Matrix u;
    switch (family) {
      case OffDiagFamily::R: u = resolvent(pi, Complex(0.0, t)); break;
      case OffDiagFamily::P: u = familyRPQTheta(sys, t).p; break;
      case OffDiagFamily::Q: u = familyRPQTheta(sys, t).q; break;
      case OffDiagFamily::Theta: u = familyRPQTheta(sys, t).theta; break;
    }
    std::vector<Index> fPoints;
    std::vector<double> dist(static_cast<std::size_t>(grid.points()));
    for (Index p = 0; p < grid.points(); ++p) {
      const auto c = grid.coords(p);
      double d2 = 0.0;
      bool inside = true;
      for (int k = 0; k < grid.n; ++k) {
        const int x = c[static_cast<std::size_t>(k)];
        int d = 0;
        if (x >= side) d = std::min(x - (side - 1), grid.m - x);
        inside = inside && d == 0;
        d2 += std::pow(d * grid.spacing(), 2);
      }
      dist[static_cast<std::size_t>(p)] = std::sqrt(d2);
      if (inside) fPoints.push_back(p);
    }
    double previousRatio = -1.0, previousSep = 0.0;
    for (double s : separationRatios) {
      const double d = s * t;
      std::vector<Index> rows, cols;
      for (Index p = 0; p < grid.points(); ++p)
        if (dist[static_cast<std::size_t>(p)] >= d * (1.0 - 1e-12))
          for (int c = 0; c < nf; ++c) rows.push_back(space.index(p, c));
      for (Index p : fPoints)
        for (int c = 0; c < nf; ++c) cols.push_back(space.index(p, c));
      if (rows.empty()) {
        out.saturated = true;
        continue;
      }
      Matrix block(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) block(static_cast<Index>(i), static_cast<Index>(j)) = u(rows[i], cols[j]);
      const double ratio = linalg::opNorm(block);
      out.rows.push_back({t, s, ratio});
      if (previousRatio > 0.0 && ratio > 0.0) out.slopes.push_back(std::log(ratio / previousRatio) / std::log(s / previousSep));
      previousRatio = ratio;
      previousSep = s;
    }
  }
  return out;
}

FwqResult testFunctionFwq(const PiBSystem& sys, const DyadicCube& cube, const Vector& w, double eps) {
  const Space& space = sys.space();
  const GridSpec& grid = space.grid;
  const int nf = space.fiber.dim();
  if (w.size() != nf) throw ArgumentError("w must be a fiber vector");
  if (!(eps > 0.0)) throw ArgumentError("eps must be positive");
  if (cube.level < 0 || cube.level > grid.levels()) throw ArgumentError("cube level out of range");
  const int side = 1 << cube.level;
  const double l = side * grid.spacing();
  if (4.0 * l > grid.length * (1.0 + 1e-12)) throw PreconditionError("4Q does not fit in the torus");
  for (int k = 0; k < grid.n; ++k)
    if (cube.corner[static_cast<std::size_t>(k)] % side != 0 || cube.corner[static_cast<std::size_t>(k)] < 0 ||
        cube.corner[static_cast<std::size_t>(k)] >= grid.m)
      throw ArgumentError("cube corner is not on the dyadic lattice");

  const double cell = grid.cellVolume();
  Vector wq = Vector::Zero(space.dim());
  std::vector<Index> inQ;
  for (Index p = 0; p < grid.points(); ++p) {
    const auto c = grid.coords(p);
    double rho = 0.0;
    bool inside = true;
    for (int k = 0; k < grid.n; ++k) {
      const int x = c[static_cast<std::size_t>(k)];
      const int a = cube.corner[static_cast<std::size_t>(k)];
      inside = inside && x >= a && x < a + side;
      double delta = std::fmod(std::abs((x - a - 0.5 * (side - 1)) * grid.spacing()), grid.length);
      delta = std::min(delta, grid.length - delta);
      rho = std::max(rho, delta);
    }
    const double eta = std::clamp((2.0 * l - rho) / l, 0.0, 1.0);
    for (int c2 = 0; c2 < nf; ++c2) wq(space.index(p, c2)) = eta * w(c2);
    if (inside) inQ.push_back(p);
  }

  const Complex tau(0.0, eps * l);
  const Vector f = wq - tau * sys.gamma.apply(resolventApply(sys.piB, tau, wq));

  FwqResult out;
  out.cubeMeasure = std::pow(l, grid.n);
  out.norm = std::sqrt(f.squaredNorm() * cell);
  Vector mean = Vector::Zero(nf);
  for (Index p : inQ)
    for (int c = 0; c < nf; ++c) mean(c) += f(space.index(p, c));
  mean /= static_cast<double>(inQ.size());
  out.meanDefect = (mean - w).norm();

  const ShiftedSolver solver(sys.piB);
  const SparseMatrix gsb = sys.gammaStarB.toSparse();
  const TGrid tg{1e-4 * l, l, 81};
  const auto t = tg.nodes();
  const double h = std::log(tg.tMax / tg.tMin) / (tg.count - 1);
  out.boxIntegral = orderedSum(static_cast<Index>(t.size()), 0.0, [&](Index k) {
    const double tk = t[static_cast<std::size_t>(k)];
    const Vector th = tk * (gsb * solver.solve(tk, f));
    double s = 0.0;
    for (Index p : inQ)
      for (int c = 0; c < nf; ++c) s += std::norm(th(space.index(p, c)));
    double wk = h;
    if (k == 0) wk = 0.5 * h + exponentialTailWeight(h, 2.0);
    if (k == static_cast<Index>(t.size()) - 1) wk = 0.5 * h;
    return wk * s * cell;
  });
  out.normRatio = out.norm / std::sqrt(out.cubeMeasure);
  out.boxRatio = eps * eps * out.boxIntegral / out.cubeMeasure;
  out.meanRatio = out.meanDefect / std::sqrt(eps);
  return out;
}

}  // namespace diracfc
