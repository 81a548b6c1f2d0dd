#pragma once

// Photoassociation line positions -> molecular binding energies.
//
// The measured detuning delta of a line differs from the binding energy b
// by the Zeeman energy of the trapped pair at the trap bottom and by the
// mean thermal energy of the pair:
//
//   h b = h delta + 2 mu B0 + 3 k_B T
//
// Recoil, Doppler and mean-field terms are reported but never applied.

#include "lrdimer/constants.hpp"
#include "lrdimer/errors.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace lrdimer {

struct Measurement {
  /// nu_L - nu_0, MHz (negative: red of the atomic line).
  double deltaV = 0.0;
  /// Trap-bottom field, gauss.
  double b0 = 0.0;
  /// Cloud temperature, microkelvin.
  double temperature = 0.0;
  /// Atomic density, cm^-3.
  std::optional<double> density;
  int vLabel = 0;
};

/// Checks the experimental conditions (field, temperature, density).
inline void validateConditions(const Measurement &m) {
  if (!(m.temperature >= 0.0))
    throw UsageError("measurement: temperature must be >= 0");
  if (!(m.b0 >= 0.0))
    throw UsageError("measurement: B0 must be >= 0");
  if (m.density && !(*m.density >= 0.0))
    throw UsageError("measurement: density must be >= 0");
}

inline void validate(const Measurement &m) {
  if (!(m.deltaV < 0.0))
    throw UsageError("measurement: detuning must be negative");
  validateConditions(m);
}

/// b_v = delta_v + (2 mu B0 + 3 k_B T) / h, MHz.
inline double bindingEnergy(const Measurement &m, const PhysicalConstants &pc = {}) {
  validate(m);
  return m.deltaV + 2.0 * pc.magneticMomentMhzPerGauss() * m.b0 +
         3.0 * units::thermalMhz(m.temperature);
}

/// Every shift and width scale of a measurement, MHz.
struct ShiftBudget {
  double zeeman = 0.0;         // 2 mu B0
  double thermalTrap = 0.0;    // (3/2) k_B T
  double thermalKinetic = 0.0; // (3/2) k_B T
  double recoil = 0.0;         // hbar^2 k^2 / 4m
  double dopplerWidth = 0.0;   // rms of hbar k.P / 2m
  std::optional<double> meanFieldBound; // 4 pi hbar^2 n a / m

  /// The part of the budget that enters the binding energy.
  double correction() const { return zeeman + thermalTrap + thermalKinetic; }
};

inline ShiftBudget shiftBudget(const Measurement &m, double scatteringLengthNm,
                               const PhysicalConstants &pc = {}) {
  validateConditions(m);
  if (!(scatteringLengthNm >= 0.0))
    throw UsageError("shiftBudget: scattering length must be >= 0");
  const double mass = pc.atomMassKg();
  const double lambda = pc.lambdaNm() * 1e-9;
  const double kT = units::boltzmann * m.temperature * 1e-6;
  ShiftBudget b;
  b.zeeman = 2.0 * pc.magneticMomentMhzPerGauss() * m.b0;
  b.thermalTrap = 1.5 * units::thermalMhz(m.temperature);
  b.thermalKinetic = b.thermalTrap;
  // molecule of mass 2m absorbing one photon: (hbar k)^2 / (2 * 2m), over h
  b.recoil = units::planck / (4.0 * mass * lambda * lambda) * 1e-6;
  // pair centre of mass: <P_z^2> = 2m k_B T, shift k P_z / (2 pi 2m)
  b.dopplerWidth = std::sqrt(kT / (2.0 * mass)) / lambda * 1e-6;
  if (m.density) {
    const double n = *m.density * 1e6; // m^-3
    const double a = scatteringLengthNm * 1e-9;
    b.meanFieldBound = units::jouleToMhz(4.0 * std::numbers::pi * units::hbar *
                                         units::hbar * n * a / mass);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Lorentzian line fit.

struct ScanPoint {
  double detuning; // MHz
  double signal;   // cloud temperature after the PA pulse, uK
};

struct LorentzianFit {
  double center = 0.0;
  double width = 0.0; // FWHM, MHz
  double amplitude = 0.0;
  double offset = 0.0;
  /// Covariance of (center, width, amplitude, offset), residual-scaled.
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
  double rss = 0.0;
  int evaluations = 0;
};

inline double lorentzian(double x, double center, double width,
                         double amplitude, double offset) {
  const double hw2 = 0.25 * width * width;
  const double d = x - center;
  return offset + amplitude * hw2 / (d * d + hw2);
}

namespace detail {

struct LorentzianFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const std::vector<ScanPoint> &data;

  int inputs() const { return 4; }
  int values() const { return static_cast<int>(data.size()); }

  // p = (center, width, amplitude, offset)
  int operator()(const Eigen::VectorXd &p, Eigen::VectorXd &r) const {
    for (std::size_t i = 0; i < data.size(); ++i)
      r(static_cast<Eigen::Index>(i)) =
          lorentzian(data[i].detuning, p(0), p(1), p(2), p(3)) - data[i].signal;
    return 0;
  }

  int df(const Eigen::VectorXd &p, Eigen::MatrixXd &j) const {
    const double hw2 = 0.25 * p(1) * p(1);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      const double d = data[i].detuning - p(0);
      const double den = d * d + hw2;
      const double shape = hw2 / den;
      j(k, 0) = p(2) * hw2 * 2.0 * d / (den * den);
      j(k, 1) = p(2) * 0.5 * p(1) * d * d / (den * den);
      j(k, 2) = shape;
      j(k, 3) = 1.0;
    }
    return 0;
  }
};

} // namespace detail

/// offset + A (w/2)^2 / ((x - c)^2 + (w/2)^2) by Levenberg-Marquardt.
/// Points may arrive in any order.
inline LorentzianFit lorentzianFit(std::vector<ScanPoint> scan,
                                   int maxEvaluations = 2000) {
  if (scan.size() < 5)
    throw UsageError("lorentzianFit: need at least five scan points");
  std::sort(scan.begin(), scan.end(),
            [](const ScanPoint &a, const ScanPoint &b) { return a.detuning < b.detuning; });
  const auto n = scan.size();

  // starting point: median baseline, extremum as peak, half-maximum span
  std::vector<double> signals;
  for (const auto &p : scan)
    signals.push_back(p.signal);
  std::nth_element(signals.begin(), signals.begin() + static_cast<long>(n / 2), signals.end());
  const double offset0 = signals[n / 2];
  std::size_t peak = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(scan[i].signal - offset0) > std::abs(scan[peak].signal - offset0))
      peak = i;
  const double amp0 = scan[peak].signal - offset0;
  std::size_t lo = peak, hi = peak;
  while (lo > 0 && std::abs(scan[lo - 1].signal - offset0) > 0.5 * std::abs(amp0))
    --lo;
  while (hi + 1 < n && std::abs(scan[hi + 1].signal - offset0) > 0.5 * std::abs(amp0))
    ++hi;
  double width0 = scan[std::min(hi + 1, n - 1)].detuning - scan[lo > 0 ? lo - 1 : 0].detuning;
  width0 = std::max(0.5 * width0, (scan.back().detuning - scan.front().detuning) / (4.0 * static_cast<double>(n)));

  Eigen::VectorXd p(4);
  p << scan[peak].detuning, width0, amp0, offset0;
  detail::LorentzianFunctor f{scan};
  Eigen::LevenbergMarquardt<detail::LorentzianFunctor> lm(f);
  lm.parameters.maxfev = maxEvaluations;
  lm.parameters.xtol = 1e-15;
  lm.parameters.ftol = 1e-15;
  const auto status = lm.minimize(p);
  if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters ||
      status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation ||
      !p.allFinite()) {
    std::ostringstream msg;
    msg << "lorentzianFit: no convergence (status " << static_cast<int>(status)
        << "), last iterate c=" << p(0) << " w=" << p(1) << " A=" << p(2)
        << " offset=" << p(3);
    throw FitError(msg.str());
  }

  LorentzianFit fit;
  fit.center = p(0);
  fit.width = std::abs(p(1));
  fit.amplitude = p(2);
  fit.offset = p(3);
  fit.evaluations = static_cast<int>(lm.nfev);
  Eigen::VectorXd r(static_cast<Eigen::Index>(n));
  f(p, r);
  fit.rss = r.squaredNorm();
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), 4);
  p(1) = fit.width;
  f.df(p, jac);
  const double s2 = n > 4 ? fit.rss / static_cast<double>(n - 4) : 0.0;
  fit.covariance = s2 * (jac.transpose() * jac).inverse();
  return fit;
}

// ---------------------------------------------------------------------------
// Zeeman slope.

struct ZeemanPoint {
  double b0;       // gauss
  double detuning; // line position after the thermal correction, MHz
  double sigma = 0.0; // MHz; 0 for unweighted
};

struct ZeemanFit {
  /// Slope of detuning against mu B0 / h (dimensionless; -2 for a pair of
  /// trapped atoms and a non-magnetic molecule).
  double slope = 0.0;
  double slopeSigma = 0.0;
  double intercept = 0.0; // MHz
  /// -2 - slope: molecular moment in units of mu.
  double deviation = 0.0;
  /// max(|deviation|, slopeSigma), units of mu.
  double momentBound = 0.0;
};

/// Weighted straight line through (mu B0 / h, detuning). Without errors the
/// slope uncertainty comes from the residual scatter.
inline ZeemanFit zeemanSlopeFit(const std::vector<ZeemanPoint> &points,
                                const PhysicalConstants &pc = {}) {
  std::vector<double> fields;
  for (const auto &p : points)
    fields.push_back(p.b0);
  std::sort(fields.begin(), fields.end());
  const auto distinct = std::unique(fields.begin(), fields.end()) - fields.begin();
  if (distinct < 2)
    throw FitError("zeemanSlopeFit: rank-deficient, all B0 values coincide");
  if (distinct < 3)
    throw UsageError("zeemanSlopeFit: need at least three distinct B0 values");

  const bool weighted = std::all_of(points.begin(), points.end(),
                                    [](const ZeemanPoint &p) { return p.sigma > 0.0; });
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd y(n), w(n);
  const double scale = pc.magneticMomentMhzPerGauss();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto &p = points[static_cast<std::size_t>(i)];
    a(i, 0) = 1.0;
    a(i, 1) = scale * p.b0;
    y(i) = p.detuning;
    w(i) = weighted ? 1.0 / p.sigma : 1.0;
  }
  const Eigen::MatrixXd aw = w.asDiagonal() * a;
  const Eigen::VectorXd yw = w.asDiagonal() * y;
  const Eigen::Matrix2d normal = aw.transpose() * aw;
  const Eigen::Vector2d beta = normal.ldlt().solve(aw.transpose() * yw);
  Eigen::Matrix2d cov = normal.inverse();
  if (!weighted) {
    const double rss = (yw - aw * beta).squaredNorm();
    cov *= n > 2 ? rss / static_cast<double>(n - 2) : 0.0;
  }
  ZeemanFit fit;
  fit.intercept = beta(0);
  fit.slope = beta(1);
  fit.slopeSigma = std::sqrt(std::max(0.0, cov(1, 1)));
  fit.deviation = -2.0 - fit.slope;
  fit.momentBound = std::max(std::abs(fit.deviation), fit.slopeSigma);
  return fit;
}

// ---------------------------------------------------------------------------
// Monte-Carlo check of the thermal averages.

struct ThermalAverage {
  /// Mean harmonic-trap energy of the pair's three quadratic coordinates, MHz.
  double trap = 0.0, trapSigma = 0.0;
  /// Mean relative kinetic energy hbar^2 q^2 / m under the s-wave measure
  /// q^2 exp(-hbar^2 q^2 / m k_B T), MHz.
  double kinetic = 0.0, kineticSigma = 0.0;
  /// Same average with the q^2 weight dropped, MHz.
  double kineticUnweighted = 0.0, kineticUnweightedSigma = 0.0;
  /// (3/2) k_B T / h, MHz.
  double expected = 0.0;
  std::size_t samples = 0;
};

namespace detail {

struct RunningMoments {
  double sum = 0.0, sumSq = 0.0;
  std::size_t n = 0;
  void add(double x) {
    sum += x;
    sumSq += x * x;
    ++n;
  }
  void merge(const RunningMoments &o) {
    sum += o.sum;
    sumSq += o.sumSq;
    n += o.n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double standardError() const {
    const double m = mean();
    const double var = std::max(0.0, sumSq / static_cast<double>(n) - m * m);
    return std::sqrt(var / static_cast<double>(n));
  }
};

} // namespace detail

/// Energies are sampled in units of k_B T: trap coordinates as standard
/// normals (U = (1/2) sum z^2), the reduced kinetic energy x^2 = hbar^2 q^2 /
/// (m k_B T) from its exact law (Gamma(3/2) with the q^2 weight, Gamma(1/2)
/// without). Independent streams with fixed seeds are merged in order.
inline ThermalAverage thermalAverageOracle(double microKelvin, std::size_t samples,
                                           std::uint64_t seed = 20020101,
                                           unsigned streams = 4) {
  if (samples < 10000)
    throw UsageError("thermalAverageOracle: need at least 1e4 samples");
  if (!(microKelvin >= 0.0))
    throw UsageError("thermalAverageOracle: temperature must be >= 0");
  if (streams == 0)
    throw UsageError("thermalAverageOracle: need at least one stream");
  const double kT = units::thermalMhz(microKelvin);

  detail::RunningMoments trap, kinetic, flat;
  for (unsigned s = 0; s < streams; ++s) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), s};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> z;
    std::gamma_distribution<double> weightedLaw(1.5, 1.0);
    std::gamma_distribution<double> flatLaw(0.5, 1.0);
    const std::size_t count = samples / streams + (s < samples % streams ? 1 : 0);
    detail::RunningMoments t, k, f;
    for (std::size_t i = 0; i < count; ++i) {
      const double x = z(rng), y = z(rng), w = z(rng);
      t.add(0.5 * kT * (x * x + y * y + w * w));
      k.add(kT * weightedLaw(rng));
      f.add(kT * flatLaw(rng));
    }
    trap.merge(t);
    kinetic.merge(k);
    flat.merge(f);
  }
  ThermalAverage out;
  out.trap = trap.mean();
  out.trapSigma = trap.standardError();
  out.kinetic = kinetic.mean();
  out.kineticSigma = kinetic.standardError();
  out.kineticUnweighted = flat.mean();
  out.kineticUnweightedSigma = flat.standardError();
  out.expected = 1.5 * kT;
  out.samples = trap.n;
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation of reduced measurements.

struct ReducedLevel {
  int v = 0;
  double bindingEnergy = 0.0; // MHz, mean of the reduced measurements
  double standardError = 0.0; // MHz, scatter / sqrt(n); 0 for a single point
  std::size_t count = 0;
};

inline std::vector<ReducedLevel> reduceByLevel(const std::vector<Measurement> &ms,
                                               const PhysicalConstants &pc = {}) {
  std::map<int, std::vector<double>> groups;
  for (const auto &m : ms)
    groups[m.vLabel].push_back(bindingEnergy(m, pc));
  std::vector<ReducedLevel> out;
  for (const auto &[v, values] : groups) {
    ReducedLevel r;
    r.v = v;
    r.count = values.size();
    double sum = 0.0;
    for (double x : values)
      sum += x;
    r.bindingEnergy = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double x : values)
        ss += (x - r.bindingEnergy) * (x - r.bindingEnergy);
      r.standardError = std::sqrt(ss / static_cast<double>(values.size() - 1) /
                                  static_cast<double>(values.size()));
    }
    out.push_back(r);
  }
  return out;
}

} // namespace lrdimer
