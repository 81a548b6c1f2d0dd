#pragma once

// Vibrational spectra of the three purely long-range ungerade wells, the
// retardation / adiabatic-correction decomposition of each level, the C3
// (hence Gamma) fit to measured binding energies and the C6 neglect check.

#include "lrdimer/basis.hpp"
#include "lrdimer/constants.hpp"
#include "lrdimer/errors.hpp"
#include "lrdimer/potentials.hpp"
#include "lrdimer/radial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lrdimer {

enum class Well { ZeroUPlus, ZeroUMinus, TwoU };

/// Where a well lives: its block and the adiabatic curve (ascending order at
/// large R) that carries it.
struct WellDefinition {
  Well well;
  const char *name;
  int omega;
  Reflection reflection;
  int curveIndex;
  /// 2^3P_J asymptote of the well curve.
  int asymptoteJ;
};

inline WellDefinition wellDefinition(Well w) {
  switch (w) {
  case Well::ZeroUPlus:
    return {w, "0u+", 0, Reflection::Plus, 3, 0};
  case Well::ZeroUMinus:
    return {w, "0u-", 0, Reflection::Minus, 1, 1};
  case Well::TwoU:
    return {w, "2u", 2, Reflection::None, 2, 1};
  }
  throw UsageError("unknown well");
}

inline std::string wellName(Well w) { return wellDefinition(w).name; }

inline Well parseWell(const std::string &s) {
  if (s == "0u+")
    return Well::ZeroUPlus;
  if (s == "0u-")
    return Well::ZeroUMinus;
  if (s == "2u")
    return Well::TwoU;
  throw UsageError("unknown well '" + s + "' (expected 0u+, 0u- or 2u)");
}

/// Bose symmetry of two identical 4He* atoms: only odd J exist in 0u+, only
/// even J in 0u-; 2u has no restriction beyond J >= Omega.
inline void checkStatistics(Well w, int j) {
  const auto def = wellDefinition(w);
  if (j < def.omega)
    throw UsageError(std::string("J must be >= ") + std::to_string(def.omega) +
                     " for the " + def.name + " well");
  if (w == Well::ZeroUPlus && j % 2 == 0)
    throw StatisticsError("J must be odd for 0u+ (Bose statistics), got J=" +
                          std::to_string(j));
  if (w == Well::ZeroUMinus && j % 2 != 0)
    throw StatisticsError("J must be even for 0u- (Bose statistics), got J=" +
                          std::to_string(j));
}

struct ModelFlags {
  bool retarded = true;
  bool radialCorrection = true;
};

struct SpectrumSettings {
  double rMin = 40.0;
  double rMax = 20000.0;
  double step = 0.5;
  /// Largest outer edge the adaptive extension may reach.
  double rMaxLimit = 200000.0;
  double nearThresholdMhz = 0.5;
  bool includeNearThreshold = false;
};

/// One well solved on one grid.
struct WellSolution {
  WellDefinition definition;
  int J = 0;
  ModelFlags flags;
  PotentialCurve curve;
  RadialPotential potential;
  std::vector<BoundLevel> levels;
  double rMax = 0.0;
};

namespace detail {

inline WellSolution solveOnGrid(Well w, int j, const ModelFlags &flags,
                                const PhysicalConstants &pc,
                                const SpectrumSettings &s, double rMax) {
  const auto def = wellDefinition(w);
  const BlockHamiltonian h(symmetryBlock(Parity::Ungerade, def.omega, def.reflection), pc);
  HamiltonianFlags hf;
  hf.retarded = flags.retarded;
  auto curves = adiabaticCurves(h, j, uniformGrid(s.rMin, rMax, s.step), hf);
  auto &curve = curves.at(static_cast<std::size_t>(def.curveIndex));
  if (curve.asymptoteJ != def.asymptoteJ)
    throw ConvergenceError(std::string("well curve of ") + def.name +
                           " does not reach the expected asymptote");
  WellSolution sol;
  sol.definition = def;
  sol.J = j;
  sol.flags = flags;
  sol.potential = effectivePotential(curve, flags.radialCorrection, pc.reducedMassAu());
  SolverSettings solver;
  solver.nearThresholdMhz = s.nearThresholdMhz;
  sol.levels = solveBoundStates(sol.potential, pc.reducedMassAu(), solver);
  sol.curve = std::move(curve);
  sol.rMax = sol.potential.r.back();
  return sol;
}

} // namespace detail

/// Solve a well, widening the outer grid edge until every level is confined.
inline WellSolution solveWell(Well w, int j, const ModelFlags &flags,
                              const PhysicalConstants &pc,
                              const SpectrumSettings &s = {}) {
  checkStatistics(w, j);
  double rMax = s.rMax;
  for (;;) {
    try {
      return detail::solveOnGrid(w, j, flags, pc, s, rMax);
    } catch (const GridExtensionError &e) {
      const double next = std::max(1.5 * rMax, 1.05 * e.requiredRmax());
      if (next > s.rMaxLimit)
        throw;
      rMax = next;
    }
  }
}

struct SpectrumRow {
  Well well = Well::ZeroUPlus;
  int J = 0;
  int v = 0;
  double energy = 0.0; // MHz
  std::optional<double> epsRet;
  std::optional<double> epsRad;
  double rMin = 0.0, rMax = 0.0, meanR = 0.0; // bohr
  bool nearThreshold = false;
};

inline SpectrumRow rowFromLevel(Well w, int j, const BoundLevel &l) {
  SpectrumRow row;
  row.well = w;
  row.J = j;
  row.v = l.v;
  row.energy = l.energy;
  row.rMin = l.rMin;
  row.rMax = l.rMax;
  row.meanR = l.meanR;
  row.nearThreshold = l.nearThreshold;
  return row;
}

inline std::vector<SpectrumRow> rowsOf(const WellSolution &sol,
                                       const SpectrumSettings &s) {
  std::vector<SpectrumRow> rows;
  for (const auto &l : sol.levels)
    if (s.includeNearThreshold || !l.nearThreshold)
      rows.push_back(rowFromLevel(sol.definition.well, sol.J, l));
  return rows;
}

/// Levels of a well ordered by v, energies relative to the well asymptote.
/// Near-threshold levels are left out unless requested.
inline std::vector<SpectrumRow> computeSpectrum(Well w, int j,
                                                const ModelFlags &flags,
                                                const PhysicalConstants &pc,
                                                const SpectrumSettings &s = {}) {
  return rowsOf(solveWell(w, j, flags, pc, s), s);
}

// ---------------------------------------------------------------------------
// Finite-difference decomposition.

struct LevelDifference {
  int v;
  double value; // MHz
};

/// Solve the same well with two flag sets on one common grid.
inline std::pair<WellSolution, WellSolution>
solvePair(Well w, int j, const ModelFlags &a, const ModelFlags &b,
          const PhysicalConstants &pc, const SpectrumSettings &s = {}) {
  WellSolution first = solveWell(w, j, a, pc, s);
  SpectrumSettings shared = s;
  shared.rMax = first.rMax;
  WellSolution second = solveWell(w, j, b, pc, shared);
  if (second.rMax > first.rMax) {
    shared.rMax = second.rMax;
    shared.rMaxLimit = second.rMax;
    first = solveWell(w, j, a, pc, shared);
  }
  return {std::move(first), std::move(second)};
}

/// E_a(v) - E_b(v) for every v present in both runs. A level missing from
/// one run is acceptable only if it is a near-threshold level.
inline std::vector<LevelDifference> pairLevels(const WellSolution &a,
                                               const WellSolution &b) {
  std::map<int, const BoundLevel *> other;
  for (const auto &l : b.levels)
    other[l.v] = &l;
  std::vector<LevelDifference> out;
  for (const auto &l : a.levels) {
    const auto it = other.find(l.v);
    if (it == other.end()) {
      if (l.nearThreshold)
        continue;
      throw PairingError("level v=" + std::to_string(l.v) +
                         " has no partner in the comparison run");
    }
    out.push_back({l.v, l.energy - it->second->energy});
    other.erase(it);
  }
  for (const auto &[v, l] : other)
    if (!l->nearThreshold)
      throw PairingError("level v=" + std::to_string(v) +
                         " has no partner in the comparison run");
  return out;
}

/// epsRet(v) = E(retarded) - E(k -> 0), radial-correction flag as given.
inline std::vector<LevelDifference> epsilonRet(Well w, int j,
                                               const PhysicalConstants &pc,
                                               const SpectrumSettings &s = {},
                                               bool radialCorrection = true) {
  const auto [ret, nonRet] = solvePair(w, j, {true, radialCorrection},
                                       {false, radialCorrection}, pc, s);
  return pairLevels(ret, nonRet);
}

/// epsRad(v) = E(with correction) - E(without), retardation flag as given.
inline std::vector<LevelDifference> epsilonRad(Well w, int j,
                                               const PhysicalConstants &pc,
                                               const SpectrumSettings &s = {},
                                               bool retarded = true) {
  const auto [with, without] =
      solvePair(w, j, {retarded, true}, {retarded, false}, pc, s);
  return pairLevels(with, without);
}

/// Full-model rows with both epsilon columns filled in.
inline std::vector<SpectrumRow> decomposedSpectrum(Well w, int j,
                                                   const PhysicalConstants &pc,
                                                   const SpectrumSettings &s = {}) {
  const auto full = solveWell(w, j, {true, true}, pc, s);
  SpectrumSettings shared = s;
  shared.rMax = full.rMax;
  const auto ret = epsilonRet(w, j, pc, shared);
  const auto rad = epsilonRad(w, j, pc, shared);
  auto rows = rowsOf(full, s);
  for (auto &row : rows) {
    for (const auto &d : ret)
      if (d.v == row.v)
        row.epsRet = d.value;
    for (const auto &d : rad)
      if (d.v == row.v)
        row.epsRad = d.value;
  }
  return rows;
}

// ---------------------------------------------------------------------------
// C3 / Gamma fit.

struct ExperimentalLevel {
  int v;
  double energy; // MHz
  double sigma;  // MHz
};

/// Binding energies of the 0u+ J=1 levels after the line-shift reduction,
/// with their one-sigma errors (v=0 was taken with a different laser setup).
inline std::vector<ExperimentalLevel> measuredZeroUPlusLevels() {
  return {{4, -18.2, 0.5}, {3, -79.6, 0.5}, {2, -253.3, 0.5},
          {1, -648.5, 0.5}, {0, -1430.0, 20.0}};
}

struct LevelResidual {
  int v;
  double experiment;
  double sigma;
  double model;
  double residual; // experiment - model, MHz
};

struct FitResult {
  double c3 = 0.0, c3Sigma = 0.0;
  /// Gamma / 2 pi in MHz.
  double gamma = 0.0, gammaSigma = 0.0;
  std::vector<LevelResidual> residuals;
  /// Largest level shift (MHz) produced by a +0.1% change of C3, over every
  /// computed level of the well (including levels without a measurement).
  double sensitivity = 0.0;
  double chi2 = 0.0;
  int iterations = 0;
};

namespace detail {

inline std::map<int, double> energiesByV(Well w, int j, const PhysicalConstants &pc,
                                         const SpectrumSettings &fixedGrid) {
  std::map<int, double> e;
  for (const auto &l : solveWell(w, j, {true, true}, pc, fixedGrid).levels)
    if (!l.nearThreshold)
      e[l.v] = l.energy;
  return e;
}

} // namespace detail

/// Shift of every level (MHz) when C3 is scaled by (1 + relativeStep).
inline std::vector<LevelDifference> c3Sensitivity(Well w, int j,
                                                  const PhysicalConstants &pc,
                                                  double relativeStep = 1e-3,
                                                  const SpectrumSettings &s = {}) {
  const auto base = solveWell(w, j, {true, true}, pc, s);
  SpectrumSettings fixed = s;
  fixed.rMax = base.rMax;
  fixed.rMaxLimit = base.rMax;
  const auto moved = solveWell(w, j, {true, true},
                               pc.withC3(pc.c3() * (1.0 + relativeStep)), fixed);
  return pairLevels(moved, base);
}

/// Weighted least squares over C3 alone (Gauss-Newton, derivative by central
/// difference), with every other constant frozen.
inline FitResult fitC3(const std::vector<ExperimentalLevel> &experimental,
                       const PhysicalConstants &pc, Well w = Well::ZeroUPlus,
                       int j = 1, const SpectrumSettings &s = {},
                       int maxIterations = 30) {
  if (experimental.size() < 2)
    throw UsageError("fitC3: need at least two experimental levels");
  for (const auto &e : experimental)
    if (!(e.sigma > 0.0) || !std::isfinite(e.sigma) || !std::isfinite(e.energy))
      throw UsageError("fitC3: every level needs a finite energy and a positive error");

  const auto base = solveWell(w, j, {true, true}, pc, s);
  SpectrumSettings fixed = s;
  fixed.rMax = base.rMax;
  fixed.rMaxLimit = base.rMax;

  const auto model = [&](double c3) {
    const auto e = detail::energiesByV(w, j, pc.withC3(c3), fixed);
    std::vector<double> out;
    for (const auto &x : experimental) {
      const auto it = e.find(x.v);
      if (it == e.end())
        throw UsageError("fitC3: the model has no level v=" + std::to_string(x.v));
      out.push_back(it->second);
    }
    return out;
  };

  FitResult result;
  double c3 = pc.c3();
  double information = 0.0;
  std::vector<double> current;
  for (int it = 1;; ++it) {
    if (it > maxIterations)
      throw FitError("fitC3: no convergence after " + std::to_string(maxIterations) +
                     " iterations (last C3 = " + std::to_string(c3) + ")");
    const double h = 1e-3 * c3;
    const auto up = model(c3 + h);
    const auto down = model(c3 - h);
    current = model(c3);
    double gradient = 0.0;
    information = 0.0;
    bool informative = false;
    for (std::size_t i = 0; i < experimental.size(); ++i) {
      const double jac = (up[i] - down[i]) / (2.0 * h);
      if (std::abs(jac * h) >= 1e-3)
        informative = true;
      const double w2 = 1.0 / (experimental[i].sigma * experimental[i].sigma);
      gradient += jac * (current[i] - experimental[i].energy) * w2;
      information += jac * jac * w2;
    }
    if (!informative)
      throw FitError("fitC3: ill-conditioned, no level moves by 1 kHz for a 0.1% change of C3");
    const double delta = -gradient / information;
    c3 += delta;
    result.iterations = it;
    if (std::abs(delta) < 1e-10 * std::abs(c3)) {
      current = model(c3);
      break;
    }
  }

  result.c3 = c3;
  result.c3Sigma = 1.0 / std::sqrt(information);
  result.gamma = gammaFromC3(c3, pc.lambdaNm()) / (2.0 * std::numbers::pi) * 1e-6;
  result.gammaSigma = result.gamma * result.c3Sigma / c3;
  for (std::size_t i = 0; i < experimental.size(); ++i) {
    const auto &x = experimental[i];
    const double r = x.energy - current[i];
    result.residuals.push_back({x.v, x.energy, x.sigma, current[i], r});
    result.chi2 += r * r / (x.sigma * x.sigma);
  }
  for (const auto &d : c3Sensitivity(w, j, pc.withC3(c3), 1e-3, fixed))
    result.sensitivity = std::max(result.sensitivity, std::abs(d.value));
  return result;
}

// ---------------------------------------------------------------------------
// C6 neglect.

struct C6Check {
  double r;
  /// (C6 / R^6) / (C3 / R^3)
  double ratio;
  bool violates;
};

inline constexpr double c6RatioBound = 1.5e-4;
inline constexpr double c6BoundRadius = 150.0;

/// Ratio of the neglected C6/R^6 term to C3/R^3. Radii beyond 150 bohr whose
/// ratio exceeds 1.5e-4 are flagged.
inline std::vector<C6Check> c6Bound(const std::vector<double> &radii,
                                    const PhysicalConstants &pc) {
  std::vector<C6Check> out;
  for (double r : radii) {
    if (!(r >= 1.0))
      throw DomainError("c6Bound: radii must be >= 1 bohr");
    const double ratio = pc.c6Bound() / (pc.c3() * r * r * r);
    out.push_back({r, ratio, r > c6BoundRadius && ratio > c6RatioBound});
  }
  return out;
}

} // namespace lrdimer
