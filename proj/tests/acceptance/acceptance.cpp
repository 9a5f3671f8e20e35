// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "diracfc/apps.hpp"
#include "diracfc/errors.hpp"
#include "diracfc/funcalc.hpp"
#include "diracfc/hodge.hpp"
#include "diracfc/quadest.hpp"
#include "testing.hpp"

using namespace diracfc;
using testing::identity;
using testing::opNorm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a measured value against a bound and folds it into the verdict.
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated] ";
    }
    detail << what << "; ";
  }
};

std::string sci(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << std::scientific << v;
  return s.str();
}

double seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double algebraDefect(const Projections& p) {
  const Index n = p.p0.rows();
  double worst = opNorm(p.p0 + p.p1 + p.p2 - identity(n));
  const Matrix* ps[] = {&p.p0, &p.p1, &p.p2};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Matrix prod = *ps[i] * *ps[j];
      worst = std::max(worst, opNorm(i == j ? Matrix(prod - *ps[i]) : prod));
    }
  return worst;
}

GridSpec randomGrid(testing::Gen& gen) {
  static const GridSpec choices[] = {{1, 8, 1.0}, {1, 16, 1.0}, {2, 4, 1.0}, {2, 8, 1.0}, {3, 2, 1.0}, {3, 4, 1.0}};
  return choices[gen.integer(0, 5)];
}

void nilpotency(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int grids = 0;
  const std::pair<int, int> limits[] = {{1, 64}, {2, 16}, {3, 8}};
  for (auto [n, mMax] : limits)
    for (int m = 2; m <= mMax; m *= 2) {
      const SparseMatrix g = buildGamma(GridSpec{n, m, 1.0}).toSparse();
      const SparseMatrix sq = g * g;
      // ||Gamma^2|| <= Frobenius norm; ||Gamma|| >= largest column norm.
      double colMax = 0.0;
      for (Index k = 0; k < g.outerSize(); ++k) colMax = std::max(colMax, g.col(k).norm());
      worst = std::max(worst, sq.norm() / (colMax * colMax));
      ++grids;
    }
  const double t = seconds(start);
  o.require(worst <= 1e-13, "max ||G^2||/||G||^2 = " + sci(worst) + " over " + std::to_string(grids) + " grids");
  o.require(t < 5.0, "runtime " + sci(t) + " s");
}

void hodgeAlgebra(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  testing::Gen gen(2024);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const GridSpec g = randomGrid(gen);
    const double omega = gen.uniform(0.0, 1.2);
    worst = std::max(worst, algebraDefect(directProjections(testing::randomSystem(g, omega, gen.seed()))));
  }
  double orth = 0.0;
  for (const GridSpec& g : {GridSpec{1, 16, 1.0}, GridSpec{2, 8, 1.0}, GridSpec{3, 4, 1.0}}) {
    const Projections p = directProjections(buildPiB(flatFormsTriple(g)));
    for (const Matrix* m : {&p.p0, &p.p1, &p.p2}) orth = std::max(orth, opNorm(*m - m->adjoint()));
    orth = std::max({orth, opNorm(p.p0.adjoint() * p.p1), opNorm(p.p1.adjoint() * p.p2), opNorm(p.p0.adjoint() * p.p2)});
  }
  const double t = seconds(start);
  o.require(worst <= 1e-8, "algebra defect " + sci(worst) + " on 20 random triples");
  o.require(orth <= 1e-10, "orthogonality defect " + sci(orth) + " with B = I");
  o.require(t < 60.0, "runtime " + sci(t) + " s");
}

void limits(Outcome& o) {
  testing::Gen gen(7);
  for (int k = 0; k < 4; ++k) {
    const GridSpec g = k < 2 ? GridSpec{1, 16, 1.0} : GridSpec{2, 4, 1.0};
    const PiBSystem sys = testing::randomSystem(g, gen.uniform(0.2, 1.0), gen.seed());
    const LimitConvergence lc = limitConvergence(sys, directProjections(sys), 1e3 / opNorm(sys.piB.dense()), 5);
    o.require(std::abs(lc.order - 1.0) <= 0.2, "order " + sci(lc.order));
  }
}

void funcalcCrossValidation(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<HoloFunction> psis = {
      HoloFunction::rational({0.0, 1.0}, {1.0, 0.0, 1.0}),
      HoloFunction::rational({0.0, 1.0}, {1.0, 0.0, 2.0, 0.0, 1.0}),
      HoloFunction::rational({0.0, 0.0, 1.0}, {1.0, 0.0, 2.0, 0.0, 1.0}),
      HoloFunction::rational({0.0, 1.0}, {4.0, 0.0, 1.0}),
      HoloFunction::expDecay(),
  };
  const GridSpec grids[] = {{1, 8, 1.0},  {1, 16, 1.0}, {1, 32, 1.0}, {1, 64, 1.0}, {1, 128, 1.0},
                            {2, 2, 1.0},  {2, 4, 1.0},  {2, 8, 1.0},  {3, 2, 1.0}, {1, 32, 1.0}};
  testing::Gen gen(99);
  double worst = 0.0;
  Index largest = 0;
  for (const GridSpec& g : grids) {
    const Matrix pi = testing::randomSystem(g, gen.uniform(0.1, 1.2), gen.seed()).piB.dense();
    largest = std::max(largest, pi.rows());
    const SpectralDecomposition sd = SpectralDecomposition::compute(pi);
    const ContourSpec spec = ContourSpec::automatic(pi);
    for (const HoloFunction& psi : psis) {
      const Matrix exact = sd.evaluate(psi);
      worst = std::max(worst, opNorm(contourPsi(pi, psi, spec).value - exact) / opNorm(exact));
    }
  }
  const double t = seconds(start);
  o.require(worst <= 1e-6, "max relative discrepancy " + sci(worst) + " (5 functions x 10 triples, up to " +
                               std::to_string(largest) + " unknowns)");
  o.require(t < 300.0, "runtime " + sci(t) + " s");
}

void selfAdjointExactness(Outcome& o) {
  for (const GridSpec& g : {GridSpec{1, 16, 1.0}, GridSpec{2, 4, 1.0}}) {
    const PiBSystem sys = buildPiB(flatFormsTriple(g));
    const Matrix pi = sys.piB.dense();
    const TGrid tg = TGrid::automatic(pi);
    const QuadRatio r = quadRatio(pi, tg);
    o.require(std::max(std::abs(r.lower - 0.5), std::abs(r.upper - 0.5)) <= 1e-6,
              "ratios [" + sci(r.lower) + ", " + sci(r.upper) + "]");
    const ResolutionCheck rc = resolutionIdentityCheck(pi, directProjections(sys).p0, tg);
    o.require(rc.defect <= 1e-6, "resolution defect " + sci(rc.defect));
  }
}

void twoSidedness(Outcome& o) {
  for (double omega : {0.3, 0.6, 0.9}) {
    const Matrix pi = testing::randomSystem(GridSpec{1, 16, 1.0}, omega, 11).piB.dense();
    const TGrid tg = TGrid::automatic(pi);
    const QuadRatio r = quadRatio(pi, tg);
    const QuadRatio f = quadRatio(pi, tg.refined());
    const double drift = std::max(std::abs(f.lower - r.lower) / r.lower, std::abs(f.upper - r.upper) / r.upper);
    o.require(r.lower > 0.0 && r.lower <= r.upper && std::isfinite(r.upper),
              "omega " + sci(omega) + ": upper/lower " + sci(r.upper / r.lower));
    o.require(drift <= 0.05, "refinement drift " + sci(drift));
  }
}

void spectralAlgebra(Outcome& o) {
  testing::Gen gen(5);
  double sq = 0.0, sum = 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int k = 0; k < 6; ++k) {
    const PiBSystem sys = testing::randomSystem(k % 2 ? GridSpec{2, 4, 1.0} : GridSpec{1, 16, 1.0},
                                                gen.uniform(0.1, 1.2), gen.seed());
    const Matrix pi = sys.piB.dense();
    const Index n = pi.rows();
    const Matrix p0 = directProjections(sys).p0;
    const SpectralDecomposition sd = SpectralDecomposition::compute(pi);
    const Matrix s = sd.evaluate(HoloFunction::sgn());
    sq = std::max(sq, opNorm(s * s - (identity(n) - p0)));
    sum = std::max(sum, opNorm(p0 + sd.evaluate(HoloFunction::xiPlus()) + sd.evaluate(HoloFunction::xiMinus()) - identity(n)));
    const NormEquivalence e = normEquivalence(sys);
    for (double v : {e.sumLow, e.piLow}) lo = std::min(lo, v);
    for (double v : {e.sumHigh, e.piHigh}) hi = std::max(hi, v);
  }
  o.require(sq <= 1e-8, "||sgn^2 - (I - P0)|| = " + sci(sq));
  o.require(sum <= 1e-8, "||P0 + E+ + E- - I|| = " + sci(sum));
  o.require(lo > 0.0 && std::isfinite(hi), "norm-equivalence constants in [" + sci(lo) + ", " + sci(hi) + "]");
}

void flatSymbols(Outcome& o) {
  const GridSpec g{1, 64, 1.0};
  const CauchyResult c = cauchyOperator(LipschitzCurve::fromSamples(g, RealVector::Zero(64)));
  const double defect = flatSymbolDefect(c.viaEigen, g);
  o.require(defect <= 1e-8, "Cauchy symbol defect " + sci(defect));
  const KatoResult k = katoSqrt(MatrixField::identity(g, 1));
  const double kd = std::max(std::abs(k.cLow - 1.0), std::abs(k.cHigh - 1.0));
  o.require(kd <= 1e-8, "Kato constants (" + sci(k.cLow) + ", " + sci(k.cHigh) + ")");
}

void offDiagonal(Outcome& o) {
  const GridSpec g{1, 256, 1.0};
  const double h = g.spacing();
  const PiBSystem systems[] = {buildPiB(flatFormsTriple(g)), testing::randomSystem(g, 0.5, 5)};
  double worstFactor = std::numeric_limits<double>::infinity();
  for (const PiBSystem& sys : systems) {
    const OffDiagResult r = offDiagProbe(sys, OffDiagFamily::R, {2.0 * h, 4.0 * h}, {4.0, 8.0, 16.0});
    o.require(!r.saturated, "probe not saturated");
    for (std::size_t k = 0; k + 1 < r.rows.size(); ++k) {
      if (r.rows[k + 1].t != r.rows[k].t) continue;
      worstFactor = std::min(worstFactor, r.rows[k].ratio / r.rows[k + 1].ratio);
    }
  }
  o.require(worstFactor >= 4.0, "smallest decay factor per doubling of d/t " + sci(worstFactor));
}

void carlesonEmbeddingCheck(Outcome& o) {
  const PiBSystem sys = testing::randomSystem(GridSpec{1, 32, 1.0}, 0.7, 3);
  const CarlesonData data = carlesonData(sys, TGrid{1e-4, 1.0, 81});
  const CarlesonResult cr = carlesonNorm(data);
  testing::Gen gen(17);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) worst = std::max(worst, carlesonEmbedding(data, cr, gen.vector(sys.space().dim())).constant);
  o.require(worst <= 16.0, "Carleson norm " + sci(cr.norm) + ", largest embedding constant " + sci(worst));
}

void derivativeFormulas(Outcome& o) {
  const testing::Family families[] = {
      testing::inverseFamily(GridSpec{1, 8, 1.0}, 0.6, 1),
      testing::inverseFamily(GridSpec{2, 4, 1.0}, 0.6, 2),
      testing::blockFamily(GridSpec{1, 16, 1.0}, 0.5, 3),
      testing::blockFamily(GridSpec{2, 4, 1.0}, 0.5, 4),
  };
  for (const auto& f : families) {
    const DerivativeCheck coarse = projectionDerivativeCheck(f.base, f.a1, f.a2, 1e-2);
    const DerivativeCheck fine = projectionDerivativeCheck(f.base, f.a1, f.a2, 5e-3);
    const double ratio = coarse.maxDiscrepancy / fine.maxDiscrepancy;
    o.require(ratio >= 3.0 && ratio <= 5.0, "halving ratio " + sci(ratio));
    o.require(fine.formulaSum <= 1e-8, "formula sum " + sci(fine.formulaSum));
  }
}

void lipschitzDependence(Outcome& o) {
  const std::vector<double> scales = {2e-2, 1e-2, 5e-3, 2.5e-3};
  const testing::Family families[] = {testing::inverseFamily(GridSpec{1, 16, 1.0}, 0.5, 8),
                                      testing::inverseFamily(GridSpec{2, 4, 1.0}, 0.5, 9)};
  for (const auto& f : families)
    for (const HoloFunction& fn : {HoloFunction::sgn(), HoloFunction::xiPlus()}) {
      const LipschitzReport r = lipschitzFunCalc(f.base, f.a1, f.a2, fn, scales);
      o.require(r.limitSpread <= 0.05, r.function + " limit spread " + sci(r.limitSpread));
    }

  const GridSpec g{2, 8, 1.0};
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  bool finite = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    for (const auto& r : metricPerturb(MetricPerturbation::random(g, 0.2, seed), {1.0, 0.5})) {
      finite = finite && std::isfinite(r.maxRatio);
      if (r.function == "sgn") {
        lo = std::min(lo, r.maxRatio);
        hi = std::max(hi, r.maxRatio);
      }
    }
  o.require(finite, "metric ratios over 10 seeds, sgn in [" + sci(lo) + ", " + sci(hi) + "]");
  bool enforced = false;
  try {
    metricPerturb(MetricPerturbation::random(g, 0.25, 1), {1.0});
  } catch (const PreconditionError&) {
    enforced = true;
  }
  o.require(enforced, "||h|| = 1/4 rejected");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void determinism(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / "diracfc_acceptance_repro";
  fs::remove_all(root);
  const fs::path configs = DIRACFC_CONFIG_DIR;
  for (const char* name : {"quad_random", "carleson", "funcalc", "lipschitz"}) {
    std::vector<std::string> reports;
    for (int threads : {1, 2}) {
      const fs::path out = root / (std::string(name) + "_" + std::to_string(threads));
      const std::string cmd = std::string("\"") + DIRACFC_TOOL + "\" run --config \"" +
                              (configs / (std::string(name) + ".json")).string() + "\" --out \"" + out.string() +
                              "\" --threads " + std::to_string(threads) + " --repro > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      o.require(rc == 0, std::string(name) + " exit status " + std::to_string(rc));
      reports.push_back(slurp(out / "report.json"));
    }
    o.require(!reports[0].empty() && reports[0] == reports[1], std::string(name) + " reports identical");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"exact nilpotency", nilpotency},
      {"Hodge projection algebra", hodgeAlgebra},
      {"resolvent limits of the projections", limits},
      {"contour vs eigenvector functional calculus", funcalcCrossValidation},
      {"self-adjoint quadratic exactness", selfAdjointExactness},
      {"two-sided quadratic estimates", twoSidedness},
      {"spectral projection algebra", spectralAlgebra},
      {"flat Cauchy and Kato symbols", flatSymbols},
      {"off-diagonal decay", offDiagonal},
      {"Carleson embedding", carlesonEmbeddingCheck},
      {"projection derivative formulas", derivativeFormulas},
      {"Lipschitz dependence", lipschitzDependence},
      {"deterministic reports", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << i + 1 << "  " << criteria[i].first << "  ("
              << o.detail.str() << std::fixed << std::setprecision(2) << seconds(start) << " s)" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
