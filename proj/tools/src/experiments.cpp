// SPDX-License-Identifier: Apache-2.0
#include "experiments.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "diracfc/apps.hpp"
#include "diracfc/errors.hpp"
#include "diracfc/hodge.hpp"
#include "diracfc/io.hpp"
#include "diracfc/linalg.hpp"

namespace diracfc::cli {

namespace {

using Tolerances = std::map<std::string, double>;

constexpr Index kDenseLimit = 4096;

Vector randomVector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector u(n);
  for (auto& x : u) x = Complex(normal(rng), normal(rng));
  return u / u.norm();
}

MatrixField readField(const std::string& path, const GridSpec& grid, int dim) {
  if (path == "identity") return MatrixField::identity(grid, dim);
  std::ifstream in(path);
  if (!in) throw ConfigError("source", "cannot open " + path);
  return io::readMatrixFieldCsv(in, grid, dim);
}

Matrix densePi(const Source& s) {
  if (s.triple.space().dim() > kDenseLimit)
    throw ConfigError("grid", "experiment needs a dense operator; at most " + std::to_string(kDenseLimit) + " unknowns");
  return buildPiB(s.triple).piB.dense();
}

HoloFunction namedPsi(const Json& entry, const std::string& field) {
  if (entry.is_object()) {
    ObjectReader r(entry, field);
    auto coefficients = [&](const std::string& key) {
      std::vector<Complex> out;
      for (double c : r.numbers(key)) out.emplace_back(c);
      return out;
    };
    auto num = coefficients("numerator");
    auto den = coefficients("denominator");
    r.finish();
    return HoloFunction::rational(num, den);
  }
  const std::string name = entry.get<std::string>();
  if (name == "q") return HoloFunction::rational({0.0, 1.0}, {1.0, 0.0, 1.0});
  if (name == "q3") return HoloFunction::rational({0.0, 1.0}, {1.0, 0.0, 2.0, 0.0, 1.0});
  if (name == "p") return HoloFunction::rational({0.0, 0.0, 1.0}, {1.0, 0.0, 2.0, 0.0, 1.0});
  if (name == "q4") return HoloFunction::rational({0.0, 1.0}, {4.0, 0.0, 1.0});
  if (name == "expDecay") return HoloFunction::expDecay();
  throw ConfigError(field, "unknown function '" + name + "'");
}

HoloFunction boundedFunction(const std::string& name, const std::string& field) {
  if (name == "sgn") return HoloFunction::sgn();
  if (name == "xiPlus") return HoloFunction::xiPlus();
  if (name == "xiMinus") return HoloFunction::xiMinus();
  if (name == "sqrtSquare") return HoloFunction::sqrtSquare();
  throw ConfigError(field, "unknown function '" + name + "'");
}

Json hypothesesJson(const HypothesisReport& h) {
  return {{"gammaNorm", h.gammaNorm},         {"nilpotencyResidual", h.nilpotencyResidual},
          {"kappa1", h.kappa1},               {"kappa2", h.kappa2},
          {"omega1", h.omega1},               {"omega2", h.omega2},
          {"omega", h.omega},                 {"h3Residual1", h.h3Residual1},
          {"h3Residual2", h.h3Residual2},     {"cancellationResidual", h.cancellationResidual},
          {"coercivityConstant", h.coercivityConstant}, {"localisationBound", h.localisationBound},
          {"rangeRankAmbiguous", h.rangeRankAmbiguous}};
}

Json equivalenceJson(const NormEquivalence& e) {
  return {{"pairLow", e.pairLow}, {"pairHigh", e.pairHigh}, {"piLow", e.piLow},
          {"piHigh", e.piHigh},   {"sumLow", e.sumLow},     {"sumHigh", e.sumHigh}};
}

Json lipschitzJson(const LipschitzReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"scale", s.scale},
                       {"perturbationNorm", s.perturbationNorm},
                       {"difference", s.difference},
                       {"ratio", s.ratio},
                       {"h3Residual", s.h3Residual},
                       {"skipped", s.skipped},
                       {"note", s.note}});
  return {{"function", r.function},   {"samples", samples},
          {"maxRatio", r.maxRatio},   {"limitSpread", r.limitSpread},
          {"secondDifference", r.secondDifference}};
}

TGrid tgridFor(const ExperimentConfig& c, const Matrix& pi) {
  return c.tgrid ? *c.tgrid : TGrid::automatic(pi);
}

ExperimentOutput runValidate(const ExperimentConfig& c, const Tolerances& tol) {
  ObjectReader p(c.params, "params");
  const int samples = p.integer("samples", 64);
  p.finish();
  const Source s = buildSource(c);
  const auto h = validateHypotheses(s.triple, samples, c.seed);
  ExperimentOutput out;
  out.results["hypotheses"] = hypothesesJson(h);
  const double scale = std::max(1.0, h.gammaNorm * h.gammaNorm);
  out.bound("nilpotency", h.nilpotencyResidual, tol.at("nilpotency") * scale);
  out.bound("h3", std::max(h.h3Residual1, h.h3Residual2), tol.at("h3") * scale);
  out.flag("accretive", h.accretive() ? Status::Pass : Status::Fail);
  if (h.rangeRankAmbiguous) out.flag("rangeRank", Status::Warn, "a singular value sits near the rank cut");
  return out;
}

ExperimentOutput runSector(const ExperimentConfig& c, const Tolerances& tol) {
  const Source s = buildSource(c);
  const Matrix pi = densePi(s);
  ObjectReader p(c.params, "params");
  const double omega =
      p.has("omega") ? p.number("omega") : linalg::spectralAngle(linalg::eigenvalues(pi), 1e-10 * linalg::opNorm(pi));
  const int angles = p.integer("angles", 6);
  const int radii = p.integer("radii", 5);
  p.finish();
  const auto taus = sectorSamples(omega, linalg::opNorm(pi), angles, radii);
  const auto r = sectorProbe(pi, omega, taus);
  ExperimentOutput out;
  out.results = {{"omega", omega},
                 {"constant", r.constant},
                 {"samples", r.samples},
                 {"worstTau", {r.worstTau.real(), r.worstTau.imag()}}};
  out.bound("resolventConstant", r.constant, tol.at("resolventConstant"));
  return out;
}

ExperimentOutput runFuncalc(const ExperimentConfig& c, const Tolerances& tol) {
  const Source s = buildSource(c);
  const Matrix pi = densePi(s);
  ObjectReader p(c.params, "params");
  const Json functions = p.has("functions") ? p.raw("functions") : Json{"q", "p", "q3", "q4", "expDecay"};
  p.finish();
  const ContourSpec spec = c.contour ? *c.contour : ContourSpec::automatic(pi);
  ExperimentOutput out;
  CsvTable table{"funcalc.csv", {"function", "relative_error", "residual_estimate", "nodes"}, {}};
  Json rows = Json::array();
  for (std::size_t i = 0; i < functions.size(); ++i) {
    const std::string label = functions[i].is_string() ? functions[i].get<std::string>() : "rational" + std::to_string(i);
    const HoloFunction f = namedPsi(functions[i], "params.functions[" + std::to_string(i) + "]");
    const auto r = contourPsi(pi, f, spec);
    const Matrix oracle = eigenOracle(pi, f);
    const double scale = std::max(linalg::opNorm(oracle), 1e-300);
    const double err = linalg::opNorm(r.value - oracle) / scale;
    rows.push_back({{"function", label}, {"relativeError", err}, {"residualEstimate", r.residualEstimate}});
    table.add({label, num(err), num(r.residualEstimate), std::to_string(r.nodes.size())});
    out.bound("contour:" + label, err, tol.at("crossValidation"));
  }
  const Matrix sgnOracle = eigenOracle(pi, HoloFunction::sgn());
  const auto sq = sgnViaResolventQuadrature(pi, SGrid::automatic(pi));
  const double sgnErr = linalg::opNorm(sq.value - sgnOracle);
  out.bound("sgnRoutes", sgnErr, tol.at("crossValidation"));
  out.results = {{"functions", rows},
                 {"contour", {{"theta", spec.theta}, {"rMin", spec.rMin}, {"rMax", spec.rMax}, {"nodesPerRay", spec.nodesPerRay}}},
                 {"sgnRouteDiscrepancy", sgnErr}};
  out.tables.push_back(std::move(table));
  return out;
}

ExperimentOutput runHodge(const ExperimentConfig& c, const Tolerances& tol) {
  const Source s = buildSource(c);
  const PiBSystem sys = buildPiB(s.triple);
  const Matrix pi = densePi(s);
  const Index n = pi.rows();
  const Matrix id = Matrix::Identity(n, n);
  const auto pr = directProjections(sys);
  const std::array<const Matrix*, 3> ps{&pr.p0, &pr.p1, &pr.p2};
  double algebra = linalg::opNorm(pr.p0 + pr.p1 + pr.p2 - id);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      algebra = std::max(algebra, linalg::opNorm(*ps[i] * *ps[j] - (i == j ? *ps[i] : Matrix::Zero(n, n))));

  ObjectReader p(c.params, "params");
  const double norm = linalg::opNorm(pi);
  const double start = p.number("limitStart", 1e3 / std::max(norm, 1e-300));
  const int doublings = p.integer("doublings", 4);
  p.finish();
  const auto lim = limitConvergence(sys, pr, start, doublings);

  const auto dec = SpectralDecomposition::compute(pi);
  const Matrix sgn = dec.evaluate(HoloFunction::sgn());
  const Matrix ep = dec.evaluate(HoloFunction::xiPlus());
  const Matrix em = dec.evaluate(HoloFunction::xiMinus());
  const double sgnSquare = linalg::opNorm(sgn * sgn - (id - pr.p0));
  const double splitting = linalg::opNorm(pr.p0 + ep + em - id);
  const auto eq = normEquivalence(sys);

  ExperimentOutput out;
  out.results = {{"dimensions", {pr.dimKernel, pr.dimRange1, pr.dimRange2}},
                 {"separation", pr.separation},
                 {"algebraResidual", algebra},
                 {"limitOrder", lim.order},
                 {"sgnSquareDefect", sgnSquare},
                 {"spectralSplittingDefect", splitting},
                 {"normEquivalence", equivalenceJson(eq)}};
  out.bound("projectionAlgebra", algebra, tol.at("algebra"));
  if (s.identityB) {
    double orth = 0.0;
    for (const Matrix* m : ps) orth = std::max(orth, linalg::opNorm(*m - m->adjoint()));
    out.results["orthogonalityResidual"] = orth;
    out.bound("orthogonality", orth, tol.at("orthogonality"));
  }
  out.bound("limitOrder", std::abs(lim.order - 1.0), tol.at("limitOrder"));
  out.bound("sgnSquare", sgnSquare, tol.at("spectral"));
  out.bound("spectralSplitting", splitting, tol.at("spectral"));
  out.flag("normEquivalenceFinite", std::isfinite(eq.sumHigh) && eq.sumLow > 0.0 ? Status::Pass : Status::Fail);
  if (pr.rankAmbiguous) out.flag("rankCut", Status::Warn, "a singular value sits near the rank cut");

  CsvTable table{"hodge_limit.csv", {"n", "error"}, {}};
  for (std::size_t i = 0; i < lim.errors.size(); ++i) table.add({num(lim.parameters[i]), num(lim.errors[i])});
  out.tables.push_back(std::move(table));
  return out;
}

ExperimentOutput runQuad(const ExperimentConfig& c, const Tolerances& tol) {
  ObjectReader(c.params, "params").finish();
  const Source s = buildSource(c);
  const PiBSystem sys = buildPiB(s.triple);
  const Matrix pi = densePi(s);
  const TGrid grid = tgridFor(c, pi);
  const auto r = quadRatio(pi, grid);
  const auto refined = quadRatio(pi, grid.refined());
  const auto res = resolutionIdentityCheck(pi, directProjections(sys).p0, grid);

  ExperimentOutput out;
  out.results = {{"lower", r.lower},
                 {"upper", r.upper},
                 {"ratio", finiteOrNull(r.upper / r.lower)},
                 {"rangeDimension", r.rangeDimension},
                 {"refinedLower", refined.lower},
                 {"refinedUpper", refined.upper},
                 {"resolutionDefect", res.defect},
                 {"tailBound", res.tailBound},
                 {"tgrid", {{"tMin", grid.tMin}, {"tMax", grid.tMax}, {"count", grid.count}}}};
  out.flag("twoSided", r.lower > 0.0 && r.upper >= r.lower && std::isfinite(r.upper) ? Status::Pass : Status::Fail);
  const double drift = std::max(std::abs(refined.lower - r.lower) / r.lower, std::abs(refined.upper - r.upper) / r.upper);
  out.bound("refinement", drift, tol.at("refinement"), true);
  out.bound("resolutionIdentity", res.defect, tol.at("resolution"));
  if (s.identityB) out.bound("flatExact", std::max(std::abs(r.lower - 0.5), std::abs(r.upper - 0.5)), tol.at("flat"));
  if (res.truncationWarning) out.flag("truncation", Status::Warn, "t-grid tails are not negligible");

  CsvTable curve{"quad_curve.csv", {"t", "norm"}, {}};
  const Vector u = randomVector(pi.rows(), c.seed);
  const Matrix pi2 = pi * pi;
  for (double t : grid.nodes()) {
    Matrix a = (t * t) * pi2;
    a.diagonal().array() += 1.0;
    curve.add({num(t), num((t * a.partialPivLu().solve(pi * u)).norm())});
  }
  out.tables.push_back(std::move(curve));
  return out;
}

ExperimentOutput runCarleson(const ExperimentConfig& c, const Tolerances& tol) {
  const Source s = buildSource(c);
  const PiBSystem sys = buildPiB(s.triple);
  ObjectReader p(c.params, "params");
  const int samples = p.integer("samples", 50);
  const double densityMin = p.number("densityMin", 1e-4);
  const int densityCount = p.integer("densityCount", 65);
  p.finish();
  if (!c.grid.dyadic()) throw ConfigError("grid.m", "carleson needs a power of two");
  const auto data = carlesonData(sys, TGrid{densityMin * c.grid.length, c.grid.length, densityCount});
  const auto norm = carlesonNorm(data);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const auto e = carlesonEmbedding(data, norm, randomVector(sys.space().dim(), c.seed + static_cast<std::uint64_t>(k)));
    worst = std::max(worst, e.constant);
  }
  ExperimentOutput out;
  out.results = {{"carlesonNorm", norm.norm}, {"levelMaxima", norm.levelMaxima}, {"embeddingConstant", worst},
                 {"samples", samples}, {"nodes", data.t.size()}};
  out.bound("embedding", worst, tol.at("embedding"));
  CsvTable table{"carleson_cubes.csv", {"level", "cube", "mass"}, {}};
  for (std::size_t j = 0; j < norm.cubeMasses.size(); ++j)
    for (std::size_t q = 0; q < norm.cubeMasses[j].size(); ++q)
      table.add({std::to_string(j), std::to_string(q), num(norm.cubeMasses[j][q])});
  out.tables.push_back(std::move(table));
  return out;
}

ExperimentOutput runOffdiag(const ExperimentConfig& c, const Tolerances& tol) {
  const Source s = buildSource(c);
  const PiBSystem sys = buildPiB(s.triple);
  densePi(s);
  const double h = c.grid.spacing();
  ObjectReader p(c.params, "params");
  const std::string familyName = p.string("family", "R");
  const auto ts = p.numbers("ts", std::vector<double>{h, 2.0 * h, 4.0 * h});
  const auto ratios = p.numbers("ratios", std::vector<double>{4.0, 8.0, 16.0});
  p.finish();
  const std::map<std::string, OffDiagFamily> families{
      {"R", OffDiagFamily::R}, {"P", OffDiagFamily::P}, {"Q", OffDiagFamily::Q}, {"Theta", OffDiagFamily::Theta}};
  if (!families.count(familyName)) throw ConfigError("params.family", "expected R, P, Q or Theta");
  for (double t : ts)
    if (!(t > 0.0 && t <= c.grid.length)) throw ConfigError("params.ts", "scales must lie in (0, L]");
  const auto r = offDiagProbe(sys, families.at(familyName), ts, ratios);

  ExperimentOutput out;
  CsvTable table{"offdiag.csv", {"t", "separation_ratio", "ratio"}, {}};
  Json rows = Json::array();
  double worstFactor = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    table.add({num(row.t), num(row.separationRatio), num(row.ratio)});
    rows.push_back({{"t", row.t}, {"separationRatio", row.separationRatio}, {"ratio", row.ratio}});
    if (i == 0) continue;
    const auto& prev = r.rows[i - 1];
    const bool doubling = prev.t == row.t && std::abs(row.separationRatio / prev.separationRatio - 2.0) < 1e-12;
    if (doubling && prev.separationRatio >= 4.0 && prev.ratio > tol.at("floor") && row.ratio > 0.0)
      worstFactor = std::min(worstFactor, prev.ratio / row.ratio);
  }
  out.results = {{"rows", rows}, {"slopes", r.slopes}, {"saturated", r.saturated},
                 {"worstDoublingFactor", finiteOrNull(worstFactor)}};
  if (std::isfinite(worstFactor))
    out.checks.push_back({"decayPerDoubling", worstFactor >= tol.at("decayFactor") ? Status::Pass : Status::Warn,
                          worstFactor, tol.at("decayFactor"), "factor per doubling of d/t"});
  if (r.saturated) out.flag("saturated", Status::Warn, "some separations leave no points on the torus");
  out.tables.push_back(std::move(table));
  return out;
}

ExperimentOutput runCauchy(const ExperimentConfig& c, const Tolerances& tol) {
  if (c.grid.n != 1) throw ConfigError("grid.n", "cauchy runs on a 1D grid");
  ObjectReader p(c.params, "params");
  const std::string shape = p.string("shape", "flat");
  const double amplitude = p.number("amplitude", 0.3);
  const double offset = p.number("offset", 0.0);
  RealVector g = RealVector::Constant(c.grid.m, offset);
  if (shape == "sine") {
    for (int i = 0; i < c.grid.m; ++i) g(i) += amplitude * c.grid.length * std::sin(2.0 * kPi * i / c.grid.m);
  } else if (shape == "samples") {
    const auto v = p.numbers("samples");
    if (static_cast<int>(v.size()) != c.grid.m) throw ConfigError("params.samples", "need one sample per grid point");
    for (int i = 0; i < c.grid.m; ++i) g(i) += v[static_cast<std::size_t>(i)];
  } else if (shape != "flat") {
    throw ConfigError("params.shape", "expected flat, sine or samples");
  }
  p.finish();
  const auto curve = LipschitzCurve::fromSamples(c.grid, g);
  const auto r = cauchyOperator(curve);
  ExperimentOutput out;
  Json near = Json::array();
  for (const auto& z : r.nearZeroEigenvalues) near.push_back({z.real(), z.imag()});
  out.results = {{"lipschitz", curve.lipschitz},   {"omega", curve.omega},
                 {"routeDiscrepancy", r.routeDiscrepancy}, {"squareDefect", r.squareDefect},
                 {"kernelDimension", r.kernelDimension},   {"nearZeroEigenvalues", near}};
  out.bound("routes", r.routeDiscrepancy, tol.at("routes"));
  out.bound("square", r.squareDefect, tol.at("square"));
  if (curve.lipschitz == 0.0) {
    const double sym = flatSymbolDefect(r.viaEigen, c.grid);
    out.results["symbolDefect"] = sym;
    out.bound("flatSymbol", sym, tol.at("symbol"));
  }
  if (r.illConditioned) out.flag("conditioning", Status::Warn, "eigenvalues close to zero");
  return out;
}

ExperimentOutput runKato(const ExperimentConfig& c, const Tolerances& tol) {
  ObjectReader p(c.params, "params");
  const std::string kind = p.string("coefficient", "identity");
  MatrixField a = MatrixField::identity(c.grid, c.grid.n);
  if (kind == "constant") {
    a = MatrixField::identity(c.grid, c.grid.n).scaled(p.number("value"));
  } else if (kind == "random") {
    a = piecewiseAccretiveField(c.grid, p.integer("cells", std::min(8, c.grid.m)), p.number("omega", 0.5), c.seed);
  } else if (kind == "file") {
    a = readField(p.string("path"), c.grid, c.grid.n);
  } else if (kind != "identity") {
    throw ConfigError("params.coefficient", "expected identity, constant, random or file");
  }
  p.finish();
  const auto r = katoSqrt(a);
  ExperimentOutput out;
  out.results = {{"cLow", r.cLow}, {"cHigh", r.cHigh}, {"ratio", finiteOrNull(r.cHigh / r.cLow)},
                 {"coefficientOmega", r.coefficientOmega}, {"spectralAngle", r.spectralAngle}};
  if (kind == "identity") out.bound("identityExact", std::max(std::abs(r.cLow - 1.0), std::abs(r.cHigh - 1.0)), tol.at("identity"));
  out.flag("finite", r.cLow > 0.0 && std::isfinite(r.cHigh) ? Status::Pass : Status::Fail);
  return out;
}

ExperimentOutput runForms(const ExperimentConfig& c, const Tolerances& tol) {
  ObjectReader p(c.params, "params");
  const std::string kind = p.string("b", "identity");
  const double omega = p.number("omega", 0.5);
  p.finish();
  const FiberLayout layout = FiberLayout::forms(c.grid.n);
  MatrixField b = MatrixField::identity(c.grid, layout.dim());
  if (kind == "random") {
    b = randomAccretiveField(c.grid, layout.dim(), omega, c.seed);
  } else if (kind == "degreeBlocks") {
    for (int k = 0; k <= c.grid.n; ++k) {
      const auto comps = layout.componentsOfDegree(k);
      const auto block = randomAccretiveField(c.grid, static_cast<int>(comps.size()), omega, c.seed + static_cast<std::uint64_t>(k));
      for (Index pt = 0; pt < c.grid.points(); ++pt)
        for (std::size_t i = 0; i < comps.size(); ++i)
          for (std::size_t j = 0; j < comps.size(); ++j)
            b.at(pt)(comps[i], comps[j]) = block.at(pt)(static_cast<Index>(i), static_cast<Index>(j));
    }
  } else if (kind != "identity") {
    throw ConfigError("params.b", "expected identity, random or degreeBlocks");
  }
  if (layout.dim() * c.grid.points() > kDenseLimit) throw ConfigError("grid", "too many unknowns for a dense experiment");
  const Matrix probe = buildPiB(formsTriple(c.grid, b.inverse(), b)).piB.dense();
  const auto r = hodgeDiracForms(b, c.tgrid ? *c.tgrid : TGrid::automatic(probe));

  ExperimentOutput out;
  out.results = {{"hypotheses", hypothesesJson(r.hypotheses)},
                 {"kernelDimension", r.kernelDimension},
                 {"normEquivalence", equivalenceJson(r.equivalence)},
                 {"quadLower", r.quad.lower},
                 {"quadUpper", r.quad.upper}};
  const double scale = std::max(1.0, r.hypotheses.gammaNorm * r.hypotheses.gammaNorm);
  out.bound("h3", std::max(r.hypotheses.h3Residual1, r.hypotheses.h3Residual2), tol.at("h3") * scale);
  if (kind == "identity") {
    out.bound("harmonicDimension", std::abs(static_cast<double>(r.kernelDimension) - std::ldexp(1.0, c.grid.n)), 0.0);
    const auto& e = r.equivalence;
    out.bound("identityPair", std::max(std::abs(e.pairLow - 1.0), std::abs(e.pairHigh - 1.0)), tol.at("identity"));
  }
  const auto& e = r.equivalence;
  out.flag("finite", e.sumLow > 0.0 && std::isfinite(e.sumHigh) && e.piLow > 0.0 && std::isfinite(e.piHigh) &&
                         r.quad.lower > 0.0 && std::isfinite(r.quad.upper)
                     ? Status::Pass
                     : Status::Fail);
  return out;
}

// Pointwise Hermitian perturbation that preserves form degree, normalized to sup norm `size`.
LinearOperator degreePreservingPerturbation(const Space& space, double size, std::uint64_t seed) {
  const GridSpec& grid = space.grid;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixField a = MatrixField::constant(grid, Matrix::Zero(space.fiber.dim(), space.fiber.dim()));
  for (Index pt = 0; pt < grid.points(); ++pt) {
    Matrix& m = a.at(pt);
    for (int i = 0; i < space.fiber.dim(); ++i)
      for (int j = 0; j < space.fiber.dim(); ++j) {
        const bool sameDegree = !space.fiber.isForms() || degree(space.fiber.mask(i)) == degree(space.fiber.mask(j));
        if (sameDegree) m(i, j) = Complex(normal(rng), normal(rng));
      }
    m = 0.5 * (m + m.adjoint()).eval();
  }
  const double sup = a.supNorm();
  return multiplication(sup > 0.0 ? a.scaled(size / sup) : a, space);
}

ExperimentOutput runLipschitz(const ExperimentConfig& c, const Tolerances& tol) {
  const Source s = buildSource(c);
  densePi(s);
  ObjectReader p(c.params, "params");
  const HoloFunction f = boundedFunction(p.string("function", "sgn"), "params.function");
  const auto scales = p.numbers("scales", std::vector<double>{1e-2, 5e-3, 2.5e-3, 1.25e-3});
  const double size = p.number("size", 1.0);
  const double quadScale = p.number("quadScale", 1e-2);
  p.finish();
  // B2 + zA with B1 - z B1 A B1 keeps B1 B2 = I to first order.
  const LinearOperator a2 = degreePreservingPerturbation(s.triple.space(), size, c.seed);
  const LinearOperator a1 = (s.triple.b1 * a2 * s.triple.b1).scaled(-1.0);
  const auto r = lipschitzFunCalc(s.triple, a1, a2, f, scales);
  const Matrix pi = densePi(s);
  const double quad = quadraticLipschitzConstant(s.triple, a1, a2, quadScale, tgridFor(c, pi));

  ExperimentOutput out;
  out.results = lipschitzJson(r);
  out.results["quadraticConstant"] = quad;
  out.bound("limitSpread", r.limitSpread, tol.at("limitSpread"));
  double h3 = 0.0;
  int skipped = 0;
  for (const auto& sample : r.samples) {
    h3 = std::max(h3, sample.h3Residual);
    skipped += sample.skipped ? 1 : 0;
  }
  out.bound("familyH3", h3, tol.at("h3"), true, "perturbed multipliers leave the hypothesis class");
  if (skipped > 0) out.flag("skippedScales", Status::Warn, std::to_string(skipped) + " scales lost accretivity");
  CsvTable table{"lipschitz.csv", {"scale", "norm", "ratio"}, {}};
  for (const auto& sample : r.samples)
    if (!sample.skipped) table.add({num(sample.scale), num(sample.difference), num(sample.ratio)});
  out.tables.push_back(std::move(table));
  return out;
}

ExperimentOutput runMetric(const ExperimentConfig& c, const Tolerances& tol) {
  ObjectReader p(c.params, "params");
  const double hNorm = p.number("hNorm", 0.2);
  const auto scales = p.numbers("scales", std::vector<double>{1.0, 0.5, 0.25});
  const int seeds = p.integer("seeds", 1);
  p.finish();
  if (seeds < 1) throw ConfigError("params.seeds", "must be positive");
  if (FiberLayout::forms(c.grid.n).dim() * c.grid.points() > kDenseLimit)
    throw ConfigError("grid", "too many unknowns for a dense experiment");

  ExperimentOutput out;
  CsvTable table{"metric.csv", {"seed", "function", "scale", "norm", "ratio"}, {}};
  Json runs = Json::array();
  std::map<std::string, std::pair<double, double>> range;
  for (int k = 0; k < seeds; ++k) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(k);
    const auto h = MetricPerturbation::random(c.grid, hNorm, seed);
    Json reports = Json::array();
    for (const auto& r : metricPerturb(h, scales)) {
      reports.push_back(lipschitzJson(r));
      auto& [lo, hi] = range.try_emplace(r.function, std::numeric_limits<double>::infinity(), 0.0).first->second;
      lo = std::min(lo, r.maxRatio);
      hi = std::max(hi, r.maxRatio);
      for (const auto& sample : r.samples)
        table.add({std::to_string(seed), r.function, num(sample.scale), num(sample.difference), num(sample.ratio)});
    }
    runs.push_back({{"seed", seed}, {"reports", reports}});
  }
  out.results = {{"hNorm", hNorm}, {"runs", runs}};
  for (const auto& [name, lohi] : range) {
    const auto [lo, hi] = lohi;
    out.flag("finite:" + name, std::isfinite(hi) ? Status::Pass : Status::Fail);
    if (seeds > 1 && hi > 0.0) {
      const double mid = 0.5 * (lo + hi);
      out.bound("seedSpread:" + name, (hi - lo) / (2.0 * mid), tol.at("seedSpread"), true);
    }
  }
  out.tables.push_back(std::move(table));
  return out;
}

}  // namespace

Source buildSource(const ExperimentConfig& c) {
  const GridSpec& grid = c.grid;
  switch (c.source.kind) {
    case SourceKind::Flat:
      return {flatFormsTriple(grid), true};
    case SourceKind::RandomAccretive: {
      const auto b = randomAccretive(grid, FiberLayout::forms(grid.n), c.source.omega, c.seed);
      return {formsTriple(grid, b.b1, b.b2), false};
    }
    case SourceKind::Block: {
      const MatrixField a1 = readField(c.source.a1, grid, 1);
      const MatrixField a2 = readField(c.source.a2, grid, grid.n);
      return {buildBlockTriple(buildGradient(grid), a1, a2), false};
    }
    case SourceKind::File: {
      const SparseMatrix g = io::readMatrixMarketFile(c.source.gamma);
      const SparseMatrix b1 = io::readMatrixMarketFile(c.source.b1);
      const SparseMatrix b2 = io::readMatrixMarketFile(c.source.b2);
      const Index n = g.rows();
      if (g.cols() != n || b1.rows() != n || b1.cols() != n || b2.rows() != n || b2.cols() != n)
        throw ConfigError("source", "operators must be square and of equal size");
      if (n % grid.points() != 0) throw ConfigError("source", "operator size is not a multiple of the grid size");
      const int fiber = static_cast<int>(n / grid.points());
      const Space space{grid, fiber == FiberLayout::forms(grid.n).dim() ? FiberLayout::forms(grid.n) : FiberLayout::plain(fiber)};
      return {{LinearOperator(space, space, g, OperatorTag::Gamma), LinearOperator(space, space, b1, OperatorTag::Multiplier),
               LinearOperator(space, space, b2, OperatorTag::Multiplier)},
              false};
    }
  }
  throw ConfigError("source", "unknown source");
}

ExperimentOutput runExperiment(const ExperimentConfig& c, const Tolerances& tol) {
  static const std::map<std::string, ExperimentOutput (*)(const ExperimentConfig&, const Tolerances&)> table{
      {"validate", runValidate}, {"sector", runSector},   {"funcalc", runFuncalc}, {"hodge", runHodge},
      {"quad", runQuad},         {"carleson", runCarleson}, {"offdiag", runOffdiag}, {"cauchy", runCauchy},
      {"kato", runKato},         {"forms", runForms},     {"lipschitz", runLipschitz}, {"metric", runMetric}};
  return table.at(c.experiment)(c, tol);
}

LinearOperator exportTarget(const ExperimentConfig& c, const std::string& target) {
  const Source s = buildSource(c);
  if (target == "gamma") return s.triple.gamma;
  if (target == "b1") return s.triple.b1;
  if (target == "b2") return s.triple.b2;
  const PiBSystem sys = buildPiB(s.triple);
  if (target == "gammaStar") return sys.gammaStar;
  if (target == "gammaStarB") return sys.gammaStarB;
  if (target == "piB") return sys.piB;
  throw ConfigError("operator", "expected gamma, gammaStar, b1, b2, gammaStarB or piB");
}

}  // namespace diracfc::cli
