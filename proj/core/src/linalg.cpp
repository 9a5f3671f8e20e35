// SPDX-License-Identifier: Apache-2.0
#include "diracfc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diracfc/errors.hpp"

namespace diracfc::linalg {

double opNorm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double sparseNormEstimate(const SparseMatrix& a, int iterations) {
  if (a.nonZeros() == 0 || a.cols() == 0) return 0.0;
  double maxAbs = 0.0;
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) maxAbs = std::max(maxAbs, std::abs(it.value()));
  if (maxAbs == 0.0) return 0.0;
  // Deterministic, generic start vector.
  Vector x(a.cols());
  for (Index i = 0; i < x.size(); ++i) x(i) = Complex(1.0 + 0.37 * std::sin(1.3 * i), 0.21 * std::cos(0.7 * i));
  x.normalize();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector y = a * x;
    const double ny = y.norm();
    if (ny == 0.0) return estimate;
    estimate = std::max(estimate, ny);
    Vector z = a.adjoint() * y;
    const double nz = z.norm();
    if (nz == 0.0) return estimate;
    x = z / nz;
  }
  return estimate;
}

bool isHermitian(const Matrix& a, double relTol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= relTol * scale;
}

namespace {

bool ambiguous(const RealVector& s, double cut) {
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut / 10.0 && s(i) < cut * 10.0) return true;
  return false;
}

}  // namespace

SubspaceBasis rangeBasis(const Matrix& a, double relTol) {
  SubspaceBasis out;
  if (a.size() == 0) {
    out.basis = Matrix(a.rows(), 0);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  out.singularValues = svd.singularValues();
  const double cut = relTol * out.singularValues(0);
  Index rank = 0;
  while (rank < out.singularValues.size() && out.singularValues(rank) > cut && out.singularValues(rank) > 0.0) ++rank;
  out.basis = svd.matrixU().leftCols(rank);
  out.rankAmbiguous = out.singularValues(0) > 0.0 && ambiguous(out.singularValues, cut);
  return out;
}

SubspaceBasis nullBasis(const Matrix& a, double relTol) {
  SubspaceBasis out;
  if (a.size() == 0) {
    out.basis = Matrix::Identity(a.cols(), a.cols());
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  out.singularValues = svd.singularValues();
  const double cut = relTol * out.singularValues(0);
  Index rank = 0;
  while (rank < out.singularValues.size() && out.singularValues(rank) > cut && out.singularValues(rank) > 0.0) ++rank;
  out.basis = svd.matrixV().rightCols(a.cols() - rank);
  out.rankAmbiguous = out.singularValues(0) > 0.0 && ambiguous(out.singularValues, cut);
  return out;
}

namespace {

Complex boundaryPoint(const Matrix& m, double alpha) {
  const Complex rot = std::polar(1.0, -alpha);
  const Matrix h = 0.5 * (rot * m + std::conj(rot) * m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Vector v = es.eigenvectors().col(h.rows() - 1);
  return v.dot(m * v);
}

}  // namespace

NumericalRange numericalRange(const Matrix& m, int samples) {
  NumericalRange out;
  if (m.rows() == 0) {
    out.empty = true;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> re(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  out.kappa = re.eigenvalues()(0);
  if (out.kappa <= 0.0) {
    out.omega = kPi / 2.0;
    return out;
  }
  samples = std::max(samples, 8);
  double bestAngle = 0.0;
  double bestAlpha = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double alpha = 2.0 * kPi * j / samples;
    const double angle = std::abs(std::arg(boundaryPoint(m, alpha)));
    if (angle > bestAngle) {
      bestAngle = angle;
      bestAlpha = alpha;
    }
  }
  // Golden-section refinement of the support direction.
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = bestAlpha - 2.0 * kPi / samples;
  double b = bestAlpha + 2.0 * kPi / samples;
  auto f = [&](double alpha) { return std::abs(std::arg(boundaryPoint(m, alpha))); };
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 40; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  out.omega = std::max({bestAngle, fc, fd});
  return out;
}

Extremes generalizedExtremes(const Matrix& h, const Matrix& g) {
  if (h.rows() == 0) return {};
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw NumericalError("generalized eigenproblem: metric not positive definite");
  const Matrix l = llt.matrixL();
  Matrix x = l.triangularView<Eigen::Lower>().solve(h);
  Matrix y = l.triangularView<Eigen::Lower>().solve(Matrix(x.adjoint()));
  y = 0.5 * (y + y.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(y, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(y.rows() - 1)};
}

Vector eigenvalues(const Matrix& a) {
  if (a.rows() == 0) return Vector(0);
  if (isHermitian(a)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cast<Complex>();
  }
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation did not converge");
  return es.eigenvalues();
}

double spectralAngle(const Vector& ev, double zeroTol) {
  double angle = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= zeroTol) continue;
    const double a = std::abs(std::arg(ev(i)));
    angle = std::max(angle, std::min(a, kPi - a));
  }
  return angle;
}

Matrix orthogonalComplement(const Matrix& q, Index ambientDim) {
  if (q.cols() == 0) return Matrix::Identity(ambientDim, ambientDim);
  const Matrix proj = Matrix::Identity(ambientDim, ambientDim) - q * q.adjoint();
  return rangeBasis(proj, 1e-8).basis;
}

}  // namespace diracfc::linalg
