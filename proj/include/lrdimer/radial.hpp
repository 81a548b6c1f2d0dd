#pragma once

// Bound vibrational levels of a single adiabatic curve.
//
// Levels are located by node counting with the renormalised Numerov method
// (ratio form, no overflow) and bisection, so no level can be skipped.
// The wavefunction is then built from outward and inward solutions matched
// at the outer classical turning point.

#include "lrdimer/constants.hpp"
#include "lrdimer/errors.hpp"
#include "lrdimer/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

namespace lrdimer {

/// Effective radial potential sampled on a uniform grid (hartree, bohr).
struct RadialPotential {
  std::vector<double> r;
  std::vector<double> v;

  double step() const { return r[1] - r[0]; }
};

/// V_eff(R) = V(R) - g(R) / (2 mu); g <= 0, so the correction is repulsive.
inline RadialPotential effectivePotential(const PotentialCurve &curve,
                                          bool includeRadialCorrection,
                                          double reducedMass) {
  if (!(reducedMass > 0.0))
    throw DomainError("effectivePotential: reduced mass must be positive");
  RadialPotential p{curve.r, curve.values};
  if (includeRadialCorrection) {
    if (curve.radialCorrection.size() != curve.r.size())
      throw UsageError("effectivePotential: curve has no radial correction");
    for (std::size_t i = 0; i < p.v.size(); ++i)
      p.v[i] -= curve.radialCorrection[i] / (2.0 * reducedMass);
  }
  return p;
}

struct BoundLevel {
  int v = 0;
  /// Energy below the curve's asymptote, MHz (negative).
  double energy = 0.0;
  /// Normalised radial function on the solver grid (u(R), bohr^-1/2).
  std::vector<double> u;
  double gridStart = 0.0;
  double gridStep = 0.0;
  /// Classical turning points, bohr.
  double rMin = 0.0;
  double rMax = 0.0;
  double meanR = 0.0;
  /// |E| below the near-threshold limit: position depends on the outer grid
  /// edge and the level is exempt from the decay check.
  bool nearThreshold = false;
  /// Level lies within the bisection tolerance of an energy-window edge.
  bool atWindowEdge = false;

  double radiusAt(std::size_t i) const {
    return gridStart + static_cast<double>(i) * gridStep;
  }
};

struct SolverSettings {
  /// Energy window in MHz relative to the asymptote; defaults to
  /// [min V_eff, 0).
  std::optional<double> windowLowMhz;
  std::optional<double> windowHighMhz;
  double nearThresholdMhz = 0.5;
  /// Required WKB attenuation of the wavefunction between the turning points
  /// and the grid ends.
  double decayTolerance = 1e-8;
  double energyToleranceMhz = 1e-7;
};

namespace detail {

inline void checkUniform(const RadialPotential &p) {
  if (p.r.size() < 4 || p.r.size() != p.v.size())
    throw UsageError("radial solver: potential needs at least four samples");
  const double h = p.step();
  if (!(h > 0.0))
    throw UsageError("radial solver: grid must be increasing");
  for (std::size_t i = 1; i < p.r.size(); ++i)
    if (std::abs((p.r[i] - p.r[i - 1]) - h) > 1e-9 * std::max(1.0, p.r[i]))
      throw UsageError("radial solver: grid must be uniform");
}

/// Number of bound states below `energy` with u(R0) = u(Rend) = 0, from the
/// node count of the renormalised Numerov ratio sequence.
inline int countBelow(const RadialPotential &p, double mu, double energy) {
  const double h2 = p.step() * p.step();
  const std::size_t n = p.r.size();
  // Q_i = 1 + h^2/12 * 2mu (E - V_i), F_i = Q_i u_i; R_i = F_{i+1}/F_i
  const auto q = [&](std::size_t i) {
    return 1.0 + h2 / 12.0 * 2.0 * mu * (energy - p.v[i]);
  };
  int nodes = 0;
  // F_0 = 0, so the recursion starts from 1/R_0 = 0
  double inverse = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ratio = (12.0 - 10.0 * q(i)) / q(i) - inverse;
    if (ratio < 0.0)
      ++nodes;
    inverse = 1.0 / ratio;
  }
  return nodes;
}

/// Solution u on [0, n) at fixed energy, outward from u_0 = 0 up to `match`
/// and inward from u_{n-1} = 0 down to `match`, joined continuously.
inline std::vector<double> matchedSolution(const RadialPotential &p, double mu,
                                           double energy, std::size_t match) {
  const double h2 = p.step() * p.step();
  const std::size_t n = p.r.size();
  std::vector<double> f(n, 0.0);
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i)
    q[i] = 1.0 + h2 / 12.0 * 2.0 * mu * (energy - p.v[i]);

  constexpr double big = 1e200;
  f[0] = 0.0;
  f[1] = 1e-20;
  for (std::size_t i = 1; i < match; ++i) {
    f[i + 1] = (12.0 - 10.0 * q[i]) / q[i] * f[i] - f[i - 1];
    if (std::abs(f[i + 1]) > big)
      for (std::size_t k = 0; k <= i + 1; ++k)
        f[k] /= big;
  }
  const double outAtMatch = f[match];

  std::vector<double> g(n, 0.0);
  g[n - 1] = 0.0;
  g[n - 2] = 1e-20;
  for (std::size_t i = n - 2; i > match; --i) {
    g[i - 1] = (12.0 - 10.0 * q[i]) / q[i] * g[i] - g[i + 1];
    if (std::abs(g[i - 1]) > big)
      for (std::size_t k = i - 1; k < n; ++k)
        g[k] /= big;
  }
  const double scale = outAtMatch / g[match];
  for (std::size_t i = match; i < n; ++i)
    f[i] = g[i] * scale;

  std::vector<double> u(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = f[i] / q[i];
    peak = std::max(peak, std::abs(u[i]));
  }
  for (double &x : u)
    x /= peak;
  return u;
}

/// WKB attenuation exp(-int kappa dR) across the forbidden region between
/// two indices (inclusive), kappa = sqrt(2 mu (V - E)) where V > E.
inline double attenuation(const RadialPotential &p, double mu, double energy,
                          std::size_t from, std::size_t to) {
  double integral = 0.0;
  const double h = p.step();
  for (std::size_t i = from; i < to; ++i) {
    const double a = std::sqrt(std::max(0.0, 2.0 * mu * (p.v[i] - energy)));
    const double b = std::sqrt(std::max(0.0, 2.0 * mu * (p.v[i + 1] - energy)));
    integral += 0.5 * h * (a + b);
  }
  return std::exp(-integral);
}

} // namespace detail

namespace detail {

/// Classically allowed interval around the potential minimum. A side that
/// reaches the grid end is reported open, with the grid end as its limit.
struct ClassicalRegion {
  double rIn = 0.0, rOut = 0.0;
  bool openInner = false, openOuter = false;
};

inline ClassicalRegion classicalRegion(const RadialPotential &p, double energy) {
  const auto n = p.v.size();
  const auto minIt = std::min_element(p.v.begin(), p.v.end());
  const auto iMin = static_cast<std::size_t>(minIt - p.v.begin());
  if (energy < *minIt)
    throw DomainError("turningPoints: energy lies below the potential minimum");
  if (energy == *minIt)
    return {p.r[iMin], p.r[iMin], false, false};
  const auto cross = [&](std::size_t a, std::size_t b) {
    const double t = (energy - p.v[a]) / (p.v[b] - p.v[a]);
    return p.r[a] + t * (p.r[b] - p.r[a]);
  };
  std::size_t lo = iMin;
  while (lo > 0 && p.v[lo - 1] < energy)
    --lo;
  std::size_t hi = iMin;
  while (hi + 1 < n && p.v[hi + 1] < energy)
    ++hi;
  ClassicalRegion c;
  c.openInner = lo == 0;
  c.openOuter = hi + 1 == n;
  c.rIn = c.openInner ? p.r.front() : cross(lo - 1, lo);
  c.rOut = c.openOuter ? p.r.back() : cross(hi, hi + 1);
  return c;
}

} // namespace detail

/// Classical turning points of the well containing the potential minimum
/// at energy `energy` (hartree), linearly interpolated between samples.
/// At the minimum itself both points coincide with the argmin.
inline std::pair<double, double> turningPoints(const RadialPotential &p,
                                               double energy) {
  const auto c = detail::classicalRegion(p, energy);
  if (c.openInner || c.openOuter)
    throw DomainError("turningPoints: energy lies outside the well");
  return {c.rIn, c.rOut};
}

/// <R> = int R u^2 dR for a normalised level.
inline double meanRadius(const BoundLevel &level) {
  double s = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < level.u.size(); ++i) {
    const double w = level.u[i] * level.u[i];
    s += level.radiusAt(i) * w;
    norm += w;
  }
  return s / norm;
}

/// Sign changes of u, ignoring samples below `relative` of max |u|.
inline int countNodes(const std::vector<double> &u, double relative = 1e-8) {
  double peak = 0.0;
  for (double x : u)
    peak = std::max(peak, std::abs(x));
  int nodes = 0;
  double last = 0.0;
  for (double x : u) {
    if (std::abs(x) <= relative * peak)
      continue;
    if (last != 0.0 && (x > 0.0) != (last > 0.0))
      ++nodes;
    last = x;
  }
  return nodes;
}

/// All bound levels of `potential` inside the energy window, ordered by v.
/// Throws GridExtensionError when a level's wavefunction is not attenuated
/// to the decay tolerance before the outer grid edge, and ConvergenceError
/// for the inner edge (near-threshold levels are exempt from both).
inline std::vector<BoundLevel> solveBoundStates(const RadialPotential &potential,
                                                double reducedMass,
                                                const SolverSettings &settings = {}) {
  detail::checkUniform(potential);
  if (!(reducedMass > 0.0))
    throw DomainError("solveBoundStates: reduced mass must be positive");
  const double mu = reducedMass;
  const auto n = potential.r.size();

  const double vMin = *std::min_element(potential.v.begin(), potential.v.end());
  double lo = settings.windowLowMhz ? units::mhzToHartree(*settings.windowLowMhz) : vMin;
  double hi = settings.windowHighMhz ? units::mhzToHartree(*settings.windowHighMhz) : 0.0;
  lo = std::max(lo, vMin);
  hi = std::min(hi, 0.0);
  std::vector<BoundLevel> levels;
  if (!(hi > lo))
    return levels;

  const int nLow = detail::countBelow(potential, mu, lo);
  const int nHigh = detail::countBelow(potential, mu, hi);
  const double tol = units::mhzToHartree(settings.energyToleranceMhz);

  for (int v = nLow; v < nHigh; ++v) {
    double a = lo, b = hi;
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      if (detail::countBelow(potential, mu, mid) > v)
        b = mid;
      else
        a = mid;
    }
    const double energy = 0.5 * (a + b);

    BoundLevel level;
    level.v = v;
    level.energy = units::hartreeToMhz(energy);
    level.gridStart = potential.r.front();
    level.gridStep = potential.step();
    level.nearThreshold = std::abs(level.energy) < settings.nearThresholdMhz;
    level.atWindowEdge = (a - lo) < 2.0 * tol || (hi - b) < 2.0 * tol;
    const auto region = detail::classicalRegion(potential, energy);
    const double rIn = region.rIn, rOut = region.rOut;
    level.rMin = rIn;
    level.rMax = rOut;
    if (!level.nearThreshold && region.openInner) {
      std::ostringstream msg;
      msg << "level v=" << v << " (" << level.energy
          << " MHz) is classically allowed at the inner grid edge R = "
          << potential.r.front() << " bohr; lower the inner edge";
      throw ConvergenceError(msg.str());
    }
    if (!level.nearThreshold && region.openOuter) {
      std::ostringstream msg;
      msg << "level v=" << v << " (" << level.energy
          << " MHz) is classically allowed at the outer grid edge R = "
          << potential.r.back() << " bohr";
      throw GridExtensionError(msg.str(), 1.5 * potential.r.back());
    }

    // match at the grid point nearest the outer turning point
    auto match = static_cast<std::size_t>(
        std::llround((rOut - potential.r.front()) / potential.step()));
    match = std::clamp<std::size_t>(match, 2, n - 3);
    level.u = detail::matchedSolution(potential, mu, energy, match);

    double norm = 0.0;
    for (double x : level.u)
      norm += x * x;
    norm = std::sqrt(norm * potential.step());
    // positive first lobe
    double first = 0.0;
    for (double x : level.u)
      if (std::abs(x) > 1e-6 * norm / std::sqrt(potential.step())) {
        first = x;
        break;
      }
    const double sign = first < 0.0 ? -1.0 : 1.0;
    for (double &x : level.u)
      x *= sign / norm;
    level.meanR = meanRadius(level);

    if (!level.nearThreshold) {
      const auto iIn = static_cast<std::size_t>(
          std::max(0.0, std::floor((rIn - potential.r.front()) / potential.step())));
      const auto iOut = std::min(
          n - 1, static_cast<std::size_t>(
                     std::ceil((rOut - potential.r.front()) / potential.step())));
      const double inner = detail::attenuation(potential, mu, energy, 0, iIn);
      const double outer = detail::attenuation(potential, mu, energy, iOut, n - 1);
      if (inner > settings.decayTolerance) {
        std::ostringstream msg;
        msg << "level v=" << v << " (" << level.energy
            << " MHz) is not confined at the inner grid edge R = "
            << potential.r.front() << " bohr; lower the inner edge";
        throw ConvergenceError(msg.str());
      }
      if (outer > settings.decayTolerance) {
        const double kappa = std::sqrt(
            std::max(2.0 * mu * (potential.v.back() - energy), 1e-300));
        const double required =
            potential.r.back() + std::log(outer / settings.decayTolerance) / kappa;
        std::ostringstream msg;
        msg << "level v=" << v << " (" << level.energy
            << " MHz) reaches the outer grid edge R = " << potential.r.back()
            << " bohr; need R_max >= " << required;
        throw GridExtensionError(msg.str(), required);
      }
    }
    levels.push_back(std::move(level));
  }
  return levels;
}

} // namespace lrdimer
