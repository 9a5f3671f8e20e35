// SPDX-License-Identifier: Apache-2.0
#include "diracfc/funcalc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "diracfc/errors.hpp"
#include "diracfc/linalg.hpp"
#include "diracfc/parallel.hpp"

namespace diracfc {

double angleFromReal(Complex z) {
  const double a = std::abs(std::arg(z));
  return std::min(a, kPi - a);
}

bool Sector::contains(Complex z, double slack) const {
  return z == Complex(0.0) || angleFromReal(z) <= omega + slack;
}

double Sector::distance(Complex tau) const {
  const double beta = angleFromReal(tau);
  if (beta <= omega) return 0.0;
  return std::abs(tau) * std::sin(beta - omega);
}

namespace {

Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

std::vector<Complex> trimmed(std::vector<Complex> c) {
  while (!c.empty() && c.back() == Complex(0.0)) c.pop_back();
  return c;
}

Vector polynomialRoots(const std::vector<Complex>& c) {
  const auto d = static_cast<Index>(c.size()) - 1;
  if (d < 1) return Vector(0);
  Matrix companion = Matrix::Zero(d, d);
  for (Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (Index i = 0; i < d; ++i) companion(i, d - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  return linalg::eigenvalues(companion);
}

}  // namespace

HoloFunction HoloFunction::rational(std::vector<Complex> numerator, std::vector<Complex> denominator) {
  HoloFunction f(FunctionKind::Rational);
  f.num_ = trimmed(std::move(numerator));
  f.den_ = trimmed(std::move(denominator));
  if (f.den_.empty()) throw ArgumentError("rational function with zero denominator");
  if (f.num_.empty()) f.num_ = {0.0};
  const Complex d0 = f.den_.front();
  f.f0_ = d0 == Complex(0.0) ? Complex(0.0) : f.num_.front() / d0;
  return f;
}

HoloFunction HoloFunction::withValueAtZero(Complex f0) const {
  HoloFunction f = *this;
  f.f0_ = f0;
  return f;
}

Complex HoloFunction::operator()(Complex z) const {
  const double re = z.real();
  switch (kind_) {
    case FunctionKind::Rational: return horner(num_, z) / horner(den_, z);
    case FunctionKind::Sgn: return re > 0.0 ? 1.0 : (re < 0.0 ? -1.0 : 0.0);
    case FunctionKind::XiPlus: return re > 0.0 ? 1.0 : 0.0;
    case FunctionKind::XiMinus: return re < 0.0 ? 1.0 : 0.0;
    case FunctionKind::SqrtSquare: return re >= 0.0 ? z : -z;
    case FunctionKind::ExpDecay: return z * std::exp(-(re >= 0.0 ? z : -z));
  }
  return 0.0;
}

bool HoloFunction::isPsiClass(double mu) const {
  if (kind_ == FunctionKind::ExpDecay) return true;
  if (kind_ != FunctionKind::Rational) return false;
  if (num_.size() == 1 && num_.front() == Complex(0.0)) return false;  // zero function carries no information
  if (num_.front() != Complex(0.0)) return false;                        // no decay at 0
  if (den_.front() == Complex(0.0)) return false;                        // pole at 0
  if (num_.size() >= den_.size()) return false;                          // no decay at infinity
  const Vector roots = polynomialRoots(den_);
  for (Index i = 0; i < roots.size(); ++i)
    if (angleFromReal(roots(i)) <= mu) return false;
  return true;
}

std::string HoloFunction::name() const {
  switch (kind_) {
    case FunctionKind::Rational: return "rational";
    case FunctionKind::Sgn: return "sgn";
    case FunctionKind::XiPlus: return "xiPlus";
    case FunctionKind::XiMinus: return "xiMinus";
    case FunctionKind::SqrtSquare: return "sqrtSquare";
    case FunctionKind::ExpDecay: return "expDecay";
  }
  return "unknown";
}

void ContourSpec::validate() const {
  if (!(theta > 0.0 && theta < kPi / 2.0)) throw ArgumentError("contour angle must lie in (0, pi/2)");
  if (!(rMin > 0.0 && rMax > rMin)) throw ArgumentError("contour radii must satisfy 0 < rMin < rMax");
  if (nodesPerRay < 8) throw ArgumentError("contour needs at least 8 nodes per ray");
}

ContourSpec ContourSpec::defaults(const Sector& sector, double scale) {
  if (!(sector.mu > sector.omega)) throw ArgumentError("sector needs mu > omega");
  scale = scale > 0.0 ? scale : 1.0;
  return {0.5 * (sector.omega + sector.mu), 1e-8 * scale, 1e8 * scale, 801};
}

ContourSpec ContourSpec::automatic(const Matrix& pi) {
  const Vector ev = linalg::eigenvalues(pi);
  double scale = 0.0;
  for (Index i = 0; i < ev.size(); ++i) scale = std::max(scale, std::abs(ev(i)));
  if (scale == 0.0) scale = 1.0;
  const double zeroTol = 1e-10 * std::max(scale, linalg::opNorm(pi));
  double smallest = scale;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > zeroTol) smallest = std::min(smallest, std::abs(ev(i)));
  const double omega = linalg::spectralAngle(ev, zeroTol);
  ContourSpec spec;
  spec.theta = 0.5 * (omega + kPi / 2.0);
  const double gap = kPi / 2.0 - spec.theta;
  spec.rMin = 1e-8 * smallest;
  spec.rMax = 1e8 * scale;
  const double step = std::min(0.25, 2.0 * kPi * gap / 30.0);
  spec.nodesPerRay = static_cast<int>(std::ceil(std::log(spec.rMax / spec.rMin) / step)) + 1;
  spec.nodesPerRay += spec.nodesPerRay % 2 == 0 ? 1 : 0;
  return spec;
}

namespace {

double rcondTolerance() { return 1e-15; }

// Trapezoid weights (unit spacing) on all nodes and on the even-indexed subset.
void trapezoidWeights(int count, std::vector<double>& fine, std::vector<double>& coarse) {
  fine.assign(static_cast<std::size_t>(count), 1.0);
  fine.front() = fine.back() = 0.5;
  coarse.assign(static_cast<std::size_t>(count), 0.0);
  const int lastEven = (count - 1) % 2 == 0 ? count - 1 : count - 2;
  for (int j = 0; j <= lastEven; j += 2) coarse[static_cast<std::size_t>(j)] = 2.0;
  coarse.front() = 1.0;
  coarse[static_cast<std::size_t>(lastEven)] = 1.0;
}

struct MatrixPair {
  Matrix fine;
  Matrix coarse;
  MatrixPair& operator+=(const MatrixPair& o) {
    fine += o.fine;
    coarse += o.coarse;
    return *this;
  }
};

}  // namespace

Matrix resolvent(const Matrix& pi, Complex tau) {
  const Index n = pi.rows();
  Matrix a = tau * pi;
  a.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Matrix> lu(a);
  if (n > 0 && !(lu.rcond() > rcondTolerance())) throw SpectralCollision(tau, "I + tau Pi is numerically singular");
  return lu.inverse();
}

Vector resolventApply(const LinearOperator& pi, Complex tau, const Vector& u) {
  const Index n = pi.rows();
  if (u.size() != n) throw ArgumentError("vector size does not match operator");
  Vector x;
  if (n < 4096) {
    Matrix a = tau * pi.dense();
    a.diagonal().array() += 1.0;
    Eigen::PartialPivLU<Matrix> lu(a);
    if (n > 0 && !(lu.rcond() > rcondTolerance())) throw SpectralCollision(tau, "I + tau Pi is numerically singular");
    x = lu.solve(u);
  } else {
    SparseMatrix a = tau * pi.toSparse();
    SparseMatrix id(n, n);
    id.setIdentity();
    a += id;
    a.makeCompressed();
    Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<Complex>> it;
    it.setTolerance(1e-12);
    it.compute(a);
    if (it.info() == Eigen::Success) x = it.solve(u);
    if (it.info() != Eigen::Success || (a * x - u).norm() > 1e-10 * u.norm()) {
      Eigen::SparseLU<SparseMatrix> lu;
      lu.compute(a);
      if (lu.info() != Eigen::Success) throw SpectralCollision(tau, "sparse factorization of I + tau Pi failed");
      x = lu.solve(u);
    }
  }
  const double residual = (u - x - tau * pi.apply(x)).norm();
  const double scale = u.norm() + std::abs(tau) * pi.apply(x).norm();
  if (residual > 1e-10 * std::max(scale, std::numeric_limits<double>::min()))
    throw NumericalError("resolvent solve missed the residual target");
  return x;
}

ResolventFamily familyRPQTheta(const PiBSystem& sys, double t) {
  if (!(t > 0.0)) throw ArgumentError("t must be positive");
  const Matrix pi = sys.piB.dense();
  ResolventFamily f;
  f.rPlus = resolvent(pi, Complex(0.0, t));
  f.rMinus = resolvent(pi, Complex(0.0, -t));
  f.p = 0.5 * (f.rPlus + f.rMinus);
  f.q = (f.rMinus - f.rPlus) / Complex(0.0, 2.0);
  f.theta = t * (sys.gammaStarB.dense() * f.p);
  f.identityDefect = (f.p - f.rPlus * f.rMinus).norm() / std::max(1.0, f.p.norm());
  return f;
}

FunCalcResult contourPsi(const Matrix& pi, const HoloFunction& psi, const ContourSpec& spec) {
  spec.validate();
  if (!psi.isPsiClass(spec.theta)) throw PreconditionError("function is not in the decaying holomorphic class on the contour sector");
  const Index n = pi.rows();
  // Every node works with the triangular factor of a single Schur reduction.
  Eigen::ComplexSchur<Matrix> schur(pi);
  if (schur.info() != Eigen::Success) throw NumericalError("Schur reduction did not converge");
  const Matrix& tri = schur.matrixT();
  const Matrix& unitary = schur.matrixU();
  const Vector ev = tri.diagonal();
  double scale = 0.0;
  for (Index i = 0; i < ev.size(); ++i) scale = std::max(scale, std::abs(ev(i)));
  const double measured = linalg::spectralAngle(ev, 1e-10 * std::max(scale, 1e-300));
  if (measured >= spec.theta) throw SectorViolation(measured, "spectrum reaches the contour");

  const int count = spec.nodesPerRay;
  const double x0 = std::log(spec.rMin);
  const double h = (std::log(spec.rMax) - x0) / (count - 1);
  std::vector<double> fine, coarse;
  trapezoidWeights(count, fine, coarse);

  // Rays traversed so each sector is circled counterclockwise.
  struct Ray {
    Complex direction;
    double orientation;
  };
  const std::array<Ray, 4> rays{{{std::polar(1.0, -spec.theta), 1.0},
                                 {std::polar(1.0, spec.theta), -1.0},
                                 {-std::polar(1.0, -spec.theta), 1.0},
                                 {-std::polar(1.0, spec.theta), -1.0}}};

  const Index total = 4 * static_cast<Index>(count);
  std::vector<QuadratureNode> nodes(static_cast<std::size_t>(total));
  const MatrixPair zero{Matrix::Zero(n, n), Matrix::Zero(n, n)};
  const Complex toOperator = 1.0 / Complex(0.0, 2.0 * kPi);

  const MatrixPair sum = orderedSum(total, zero, [&](Index k) {
    const auto& ray = rays[static_cast<std::size_t>(k / count)];
    const int j = static_cast<int>(k % count);
    const double x = x0 + j * h;
    const double r = std::exp(x);
    const Complex lambda = r * ray.direction;
    const Vector d = lambda - ev.array();
    if (n > 0 && !(d.cwiseAbs().minCoeff() > 1e-14 * std::max(r, scale)))
      throw SpectralCollision(-1.0 / lambda, "contour node hits the spectrum");
    // (lambda - T)^{-1} is upper triangular; column-oriented back substitution.
    Matrix inv = Matrix::Zero(n, n);
    for (Index c = 0; c < n; ++c) {
      auto x = inv.col(c);
      x(c) = 1.0;
      for (Index i = c; i >= 0; --i) {
        x(i) /= d(i);
        if (i > 0) x.head(i) += tri.col(i).head(i) * x(i);
      }
    }
    const Matrix integrand = (ray.orientation * psi(lambda) * ray.direction * r * toOperator) * inv;
    const double integrandNorm = integrand.norm();
    nodes[static_cast<std::size_t>(k)] = {x, h * fine[static_cast<std::size_t>(j)], h * fine[static_cast<std::size_t>(j)] * integrandNorm};
    return MatrixPair{h * fine[static_cast<std::size_t>(j)] * integrand, h * coarse[static_cast<std::size_t>(j)] * integrand};
  });

  FunCalcResult out;
  out.value = unitary * sum.fine * unitary.adjoint();
  out.nodes = std::move(nodes);
  const double valueNorm = linalg::opNorm(sum.fine);
  const double denom = valueNorm > 0.0 ? valueNorm : 1.0;
  // Tail past each truncation point, extrapolating the decay rate seen at the last two nodes.
  double tail = 0.0;
  auto integrandNorm = [&](int r, int j) {
    const auto& node = out.nodes[static_cast<std::size_t>(r * count + j)];
    return node.termNorm / node.weight;
  };
  for (int r = 0; r < 4; ++r)
    for (auto [end, inner] : {std::pair{0, 1}, std::pair{count - 1, count - 2}}) {
      const double fe = integrandNorm(r, end);
      const double fi = integrandNorm(r, inner);
      const double rate = fe > 0.0 && fi > fe ? std::log(fi / fe) / h : 0.0;
      tail += rate > 0.0 ? fe / rate : fe * (std::log(spec.rMax) - x0);
    }
  out.residualEstimate = (linalg::opNorm(sum.fine - sum.coarse) + tail) / denom;
  return out;
}

SpectralDecomposition SpectralDecomposition::compute(const Matrix& pi) {
  SpectralDecomposition d;
  const Index n = pi.rows();
  d.scale_ = linalg::opNorm(pi);
  if (n == 0 || d.scale_ == 0.0) {
    d.values_ = Vector::Zero(n);
    d.vectors_ = d.inverse_ = Matrix::Identity(n, n);
    return d;
  }
  if (linalg::isHermitian(pi)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(pi);
    d.values_ = es.eigenvalues().cast<Complex>();
    d.vectors_ = es.eigenvectors();
    d.inverse_ = d.vectors_.adjoint();
    d.condition_ = 1.0;
    return d;
  }
  Eigen::ComplexEigenSolver<Matrix> es(pi);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition did not converge");
  d.values_ = es.eigenvalues();
  d.vectors_ = es.eigenvectors();
  auto conditionOf = [](const Matrix& v) {
    Eigen::JacobiSVD<Matrix> svd(v);
    const auto& s = svd.singularValues();
    return s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
  };
  d.condition_ = conditionOf(d.vectors_);
  if (d.condition_ > 1e6) {
    // Rebuild bases of repeated eigenvalues from null spaces.
    const double zeroTol = d.zeroTolerance();
    const double clusterTol = 1e-9 * d.scale_;
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    int clusters = 0;
    for (Index i = 0; i < n; ++i) {
      if (label[static_cast<std::size_t>(i)] >= 0) continue;
      label[static_cast<std::size_t>(i)] = clusters;
      for (Index j = i + 1; j < n; ++j) {
        if (label[static_cast<std::size_t>(j)] >= 0) continue;
        const bool bothZero = std::abs(d.values_(i)) <= zeroTol && std::abs(d.values_(j)) <= zeroTol;
        if (bothZero || std::abs(d.values_(i) - d.values_(j)) <= clusterTol) label[static_cast<std::size_t>(j)] = clusters;
      }
      ++clusters;
    }
    for (int c = 0; c < clusters; ++c) {
      std::vector<Index> members;
      for (Index i = 0; i < n; ++i)
        if (label[static_cast<std::size_t>(i)] == c) members.push_back(i);
      if (members.size() < 2) continue;
      Complex centre = 0.0;
      for (Index i : members) centre += d.values_(i);
      centre /= static_cast<double>(members.size());
      if (std::abs(centre) <= zeroTol) centre = 0.0;
      Matrix shifted = pi;
      shifted.diagonal().array() -= centre;
      Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
      const auto k = static_cast<Index>(members.size());
      const Matrix basis = svd.matrixV().rightCols(k);
      for (Index a = 0; a < k; ++a) {
        d.vectors_.col(members[static_cast<std::size_t>(a)]) = basis.col(a);
        d.values_(members[static_cast<std::size_t>(a)]) = centre;
      }
    }
    d.condition_ = conditionOf(d.vectors_);
  }
  if (!(d.condition_ < 1e8)) throw OracleUnavailable(d.condition_, "eigenvector matrix is too ill conditioned");
  d.inverse_ = d.vectors_.partialPivLu().inverse();
  return d;
}

Index SpectralDecomposition::kernelDimension() const {
  Index k = 0;
  for (Index i = 0; i < values_.size(); ++i)
    if (std::abs(values_(i)) <= zeroTolerance()) ++k;
  return k;
}

Matrix SpectralDecomposition::evaluate(const HoloFunction& f, const std::optional<Sector>& sector) const {
  const Index n = values_.size();
  Vector fv(n);
  for (Index i = 0; i < n; ++i) {
    const Complex lambda = values_(i);
    if (std::abs(lambda) <= zeroTolerance() || scale_ == 0.0) {
      fv(i) = f.atZero();
      continue;
    }
    if (sector && angleFromReal(lambda) >= sector->mu)
      throw SectorViolation(angleFromReal(lambda), "eigenvalue outside the function's sector");
    if (f.cutsImaginaryAxis() && std::abs(lambda.real()) <= 1e-12 * scale_)
      throw SectorViolation(kPi / 2.0, "eigenvalue on the imaginary axis");
    fv(i) = f(lambda);
  }
  return vectors_ * fv.asDiagonal() * inverse_;
}

Matrix eigenOracle(const Matrix& pi, const HoloFunction& f, const std::optional<Sector>& sector) {
  return SpectralDecomposition::compute(pi).evaluate(f, sector);
}

namespace {

// Leading coefficient and roots, after dropping vanishing top coefficients.
std::pair<Complex, std::vector<Complex>> factorPolynomial(std::vector<Complex> c) {
  double scale = 0.0;
  for (Complex x : c) scale = std::max(scale, std::abs(x));
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
  if (c.empty()) return {0.0, {}};
  const Vector r = polynomialRoots(c);
  std::vector<Complex> roots(r.begin(), r.end());
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return std::make_pair(a.real(), a.imag()) < std::make_pair(b.real(), b.imag());
  });
  return {c.back(), roots};
}

}  // namespace

// Product of linear factors, numerator and denominator interleaved so that no
// intermediate grows like a high power of Pi.
Matrix rationalOf(const Matrix& pi, const HoloFunction& f) {
  if (f.kind() != FunctionKind::Rational) throw ArgumentError("rationalOf needs a rational function");
  const Index n = pi.rows();
  const auto [a, zeros] = factorPolynomial(f.numerator());
  const auto [c, poles] = factorPolynomial(f.denominator());
  Matrix v = Matrix::Identity(n, n) * (a / c);
  if (a == Complex(0.0)) return Matrix::Zero(n, n);
  const std::size_t steps = std::max(zeros.size(), poles.size());
  for (std::size_t k = 0; k < steps; ++k) {
    if (k < zeros.size()) {
      Matrix shifted = pi;
      shifted.diagonal().array() -= zeros[k];
      v = (shifted * v).eval();
    }
    if (k < poles.size()) {
      Matrix shifted = pi;
      shifted.diagonal().array() -= poles[k];
      Eigen::PartialPivLU<Matrix> lu(shifted);
      if (n > 0 && !(lu.rcond() > rcondTolerance())) throw SpectralCollision(poles[k], "denominator is singular on the spectrum");
      v = lu.solve(v);
    }
  }
  return v;
}

void SGrid::validate() const {
  if (!(sMin > 0.0 && sMax > sMin)) throw ArgumentError("s-grid needs 0 < sMin < sMax");
  if (count < 8) throw ArgumentError("s-grid needs at least 8 nodes");
}

SGrid SGrid::automatic(const Matrix& pi) {
  const Vector ev = linalg::eigenvalues(pi);
  double scale = 0.0;
  for (Index i = 0; i < ev.size(); ++i) scale = std::max(scale, std::abs(ev(i)));
  if (scale == 0.0) return {};
  const double zeroTol = 1e-10 * std::max(scale, linalg::opNorm(pi));
  double smallest = scale;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > zeroTol) smallest = std::min(smallest, std::abs(ev(i)));
  const double gap = kPi / 2.0 - linalg::spectralAngle(ev, zeroTol);
  SGrid g;
  g.sMin = 1e-4 / scale;
  g.sMax = 1e4 / smallest;
  const double step = std::min(0.2, 2.0 * kPi * gap / 30.0);
  g.count = static_cast<int>(std::ceil(std::log(g.sMax / g.sMin) / step)) + 1;
  g.count += g.count % 2 == 0 ? 1 : 0;
  return g;
}

FunCalcResult sgnViaResolventQuadrature(const Matrix& pi, const SGrid& grid) {
  grid.validate();
  const Index n = pi.rows();
  const Matrix pi2 = pi * pi;
  const int count = grid.count;
  const double x0 = std::log(grid.sMin);
  const double h = (std::log(grid.sMax) - x0) / (count - 1);
  std::vector<double> fine, coarse;
  trapezoidWeights(count, fine, coarse);
  const int lastEven = (count - 1) % 2 == 0 ? count - 1 : count - 2;

  double scale = 0.0;
  for (Index i = 0; i < n; ++i) scale = std::max(scale, pi.row(i).cwiseAbs().sum());
  // Past the ends Q_s decays like e^{-|log s|}; summing the trapezoid rule over
  // that exponential tail gives the extra end weight (h/2) coth(h/2).
  auto tailWeight = [](double step) { return 0.5 * step / std::tanh(0.5 * step); };

  std::vector<QuadratureNode> nodes(static_cast<std::size_t>(count));
  const MatrixPair zero{Matrix::Zero(n, n), Matrix::Zero(n, n)};
  const MatrixPair sum = orderedSum(static_cast<Index>(count), zero, [&](Index k) {
    const auto j = static_cast<std::size_t>(k);
    const double s = std::exp(x0 + static_cast<double>(k) * h);
    Matrix a = (s * s) * pi2;
    a.diagonal().array() += 1.0;
    Eigen::PartialPivLU<Matrix> lu(a);
    if (n > 0 && !(lu.rcond() > rcondTolerance() / (1.0 + s * s * scale * scale)))
      throw SpectralCollision(Complex(0.0, s), "I + s^2 Pi^2 is numerically singular");
    const Matrix q = s * lu.solve(pi);
    const double wf = h * fine[j] + ((k == 0 || k == count - 1) ? tailWeight(h) : 0.0);
    const double wc = h * coarse[j] + ((k == 0 || k == lastEven) ? tailWeight(2.0 * h) : 0.0);
    nodes[j] = {x0 + static_cast<double>(k) * h, wf, wf * q.norm()};
    return MatrixPair{wf * q, wc * q};
  });
  FunCalcResult out;
  out.value = (2.0 / kPi) * sum.fine;
  out.nodes = std::move(nodes);
  const double norm = linalg::opNorm(out.value);
  out.residualEstimate = (2.0 / kPi) * linalg::opNorm(sum.fine - sum.coarse) / (norm > 0.0 ? norm : 1.0);
  return out;
}

std::vector<Complex> sectorSamples(double omega, double scale, int angles, int radii) {
  std::vector<Complex> taus;
  scale = scale > 0.0 ? scale : 1.0;
  for (int a = 1; a <= angles; ++a) {
    const double beta = omega + (kPi / 2.0 - omega) * a / angles;
    for (int r = 0; r < radii; ++r) {
      const double radius = std::pow(10.0, -2.0 + 4.0 * r / std::max(1, radii - 1)) / scale;
      for (double base : {beta, -beta, kPi - beta, beta - kPi}) taus.push_back(std::polar(radius, base));
    }
  }
  return taus;
}

SectorProbeResult sectorProbe(const Matrix& pi, double omega, const std::vector<Complex>& taus) {
  const Vector ev = linalg::eigenvalues(pi);
  double scale = 0.0;
  for (Index i = 0; i < ev.size(); ++i) scale = std::max(scale, std::abs(ev(i)));
  const double measured = linalg::spectralAngle(ev, 1e-10 * std::max(scale, 1e-300));
  if (measured > omega + 1e-8) throw SectorViolation(measured, "spectrum lies outside the sector");
  const Sector sector{omega, kPi / 2.0};
  SectorProbeResult out;
  for (const Complex tau : taus) {
    const double dist = sector.distance(tau);
    if (dist <= 0.0) continue;
    const double c = linalg::opNorm(resolvent(pi, tau)) * dist / std::abs(tau);
    ++out.samples;
    if (c > out.constant) {
      out.constant = c;
      out.worstTau = tau;
    }
  }
  return out;
}

}  // namespace diracfc
