// SPDX-License-Identifier: Apache-2.0
#include "diracfc/hodge.hpp"

#include <cmath>

#include "diracfc/errors.hpp"
#include "diracfc/funcalc.hpp"
#include "diracfc/linalg.hpp"

namespace diracfc {

Projections directProjections(const PiBSystem& sys, double relTol) {
  const Matrix pi = sys.piB.dense();
  const Matrix gsb = sys.gammaStarB.dense();
  const Matrix g = sys.gamma.dense();
  const Index n = pi.rows();

  const auto kernel = linalg::nullBasis(pi, relTol);
  const auto range1 = linalg::rangeBasis(gsb, relTol);
  const auto range2 = linalg::rangeBasis(g, relTol);

  Projections out;
  out.dimKernel = kernel.basis.cols();
  out.dimRange1 = range1.basis.cols();
  out.dimRange2 = range2.basis.cols();
  out.rankAmbiguous = kernel.rankAmbiguous || range1.rankAmbiguous || range2.rankAmbiguous;
  out.kernelResidual = (g * kernel.basis).norm() + (gsb * kernel.basis).norm();

  if (out.dimKernel + out.dimRange1 + out.dimRange2 != n)
    throw DecompositionFailure(0.0, "subspace dimensions do not add up to the space dimension");

  Matrix c(n, n);
  c << kernel.basis, range1.basis, range2.basis;
  Eigen::JacobiSVD<Matrix> svd(c);
  out.separation = n > 0 ? svd.singularValues()(n - 1) : 1.0;
  if (out.separation < 1e-8) throw DecompositionFailure(out.separation, "subspaces are nearly dependent");
  const double scale = std::max(1.0, linalg::opNorm(pi));
  if (out.kernelResidual > 1e-6 * scale * std::sqrt(static_cast<double>(std::max<Index>(out.dimKernel, 1))))
    throw DecompositionFailure(out.separation, "null space of Pi_B is not inside N(Gamma) and N(Gamma^*_B)");

  const Matrix cinv = c.partialPivLu().inverse();
  out.p0 = kernel.basis * cinv.topRows(out.dimKernel);
  out.p1 = range1.basis * cinv.middleRows(out.dimKernel, out.dimRange1);
  out.p2 = range2.basis * cinv.bottomRows(out.dimRange2);
  return out;
}

Projections limitProjections(const PiBSystem& sys, double n) {
  if (!(n > 0.0)) throw ArgumentError("limit parameter must be positive");
  const Complex in(0.0, n);
  const Matrix r = resolvent(sys.piB.dense(), in);
  Projections out;
  out.p0 = r;
  out.p1 = in * (sys.gammaStarB.dense() * r);
  out.p2 = in * (sys.gamma.dense() * r);
  return out;
}

double defaultLimitParameter(const PiBSystem& sys) {
  const double norm = linalg::opNorm(sys.piB.dense());
  return 1e6 / (norm > 0.0 ? norm : 1.0);
}

LimitConvergence limitConvergence(const PiBSystem& sys, const Projections& ref, double n0, int doublings) {
  if (doublings < 1) throw ArgumentError("need at least one doubling");
  LimitConvergence out;
  double n = n0;
  for (int k = 0; k <= doublings; ++k, n *= 2.0) {
    const auto lim = limitProjections(sys, n);
    const double e = std::max({linalg::opNorm(lim.p0 - ref.p0), linalg::opNorm(lim.p1 - ref.p1),
                               linalg::opNorm(lim.p2 - ref.p2)});
    out.parameters.push_back(n);
    out.errors.push_back(e);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto m = static_cast<double>(out.errors.size());
  for (std::size_t i = 0; i < out.errors.size(); ++i) {
    const double x = std::log(out.parameters[i]);
    const double y = std::log(std::max(out.errors[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.order = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

namespace {

PTilde ptildeAt(const PiBSystem& sys, double n) {
  const Complex in(0.0, n);
  const Matrix r = resolvent(sys.piB.dense(), in);
  const Matrix gs = sys.gammaStar.dense();
  PTilde out;
  out.p1 = in * (gs * (sys.b2.dense() * r));
  out.p2 = in * (r * (sys.b1.dense() * gs));
  return out;
}

}  // namespace

PTilde ptilde(const PiBSystem& sys, double n, bool extrapolate) {
  if (!(n > 0.0)) throw ArgumentError("limit parameter must be positive");
  PTilde a = ptildeAt(sys, n);
  if (!extrapolate) return a;
  const PTilde b = ptildeAt(sys, 2.0 * n);
  a.p1 = 2.0 * b.p1 - a.p1;
  a.p2 = 2.0 * b.p2 - a.p2;
  return a;
}

Matrix kernelProjection(const Matrix& t, double relTol) {
  const Index n = t.rows();
  const auto kernel = linalg::nullBasis(t, relTol);
  const auto range = linalg::rangeBasis(t, relTol);
  if (kernel.basis.cols() + range.basis.cols() != n)
    throw DecompositionFailure(0.0, "kernel and range do not span");
  Matrix c(n, n);
  c << kernel.basis, range.basis;
  Eigen::JacobiSVD<Matrix> svd(c);
  const double sep = n > 0 ? svd.singularValues()(n - 1) : 1.0;
  if (sep < 1e-8) throw DecompositionFailure(sep, "kernel and range are nearly dependent");
  return kernel.basis * c.partialPivLu().inverse().topRows(kernel.basis.cols());
}

DerivativeCheck projectionDerivativeCheck(const Triple& base, const LinearOperator& a1, const LinearOperator& a2,
                                          double eps) {
  if (!(eps > 0.0)) throw ArgumentError("step must be positive");
  auto at = [&](double z) {
    return buildPiB(Triple{base.gamma, base.b1 + a1.scaled(z), base.b2 + a2.scaled(z)});
  };
  const PiBSystem sys0 = buildPiB(base);
  const auto plus = directProjections(at(eps));
  const auto minus = directProjections(at(-eps));
  const auto p = directProjections(sys0);
  const auto pt = ptilde(sys0, defaultLimitParameter(sys0));
  const Matrix A1 = a1.dense();
  const Matrix A2 = a2.dense();

  const Matrix d0 = -p.p0 * A1 * pt.p1 - pt.p2 * A2 * p.p0;
  const Matrix d1 = p.p0 * A1 * pt.p1 - pt.p2 * A2 * p.p1;
  const Matrix d2 = -p.p2 * A1 * pt.p1 + pt.p2 * A2 * p.p0;

  DerivativeCheck out;
  out.discrepancy[0] = linalg::opNorm((plus.p0 - minus.p0) / (2.0 * eps) - d0);
  out.discrepancy[1] = linalg::opNorm((plus.p1 - minus.p1) / (2.0 * eps) - d1);
  out.discrepancy[2] = linalg::opNorm((plus.p2 - minus.p2) / (2.0 * eps) - d2);
  out.maxDiscrepancy = std::max({out.discrepancy[0], out.discrepancy[1], out.discrepancy[2]});
  out.formulaSum = linalg::opNorm(d0 + d1 + d2);
  out.cancellationResidual = linalg::opNorm(p.p2 * A1 * pt.p1 + pt.p2 * A2 * p.p1);

  const SparseMatrix gs = base.gamma.toSparse().adjoint();
  const SparseMatrix g = base.gamma.toSparse();
  const SparseMatrix b1 = base.b1.toSparse(), b2 = base.b2.toSparse();
  const SparseMatrix sa1 = a1.toSparse(), sa2 = a2.toSparse();
  out.familyH3Residual = linalg::sparseNormEstimate(SparseMatrix(gs * (b2 * sa1 + sa2 * b1) * gs)) +
                         linalg::sparseNormEstimate(SparseMatrix(g * (sa1 * b2 + b1 * sa2) * g));
  return out;
}

}  // namespace diracfc
