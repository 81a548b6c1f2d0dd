#pragma once

// Physical constants, unit conversions and the fixed parameters of the
// 2^3S + 2^3P helium system.
//
// Everything inside the library is in atomic units (hartree, bohr, electron
// mass, hbar = 1). Laboratory units (MHz, GHz, nm, uK, gauss) only appear at
// the boundaries, through the conversion table in `units`.

#include "lrdimer/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace lrdimer {

namespace units {

// CODATA 2018 values. Every conversion in the project goes through this table.
inline constexpr double hartreeHz = 6.579683920502e15;
inline constexpr double hartreeMhz = hartreeHz * 1e-6;
inline constexpr double bohrMeter = 5.29177210903e-11;
inline constexpr double bohrNm = bohrMeter * 1e9;
inline constexpr double atomicTimeSecond = 2.4188843265857e-17;
inline constexpr double daltonElectronMasses = 1822.888486209;
inline constexpr double daltonKg = 1.66053906660e-27;

inline constexpr double planck = 6.62607015e-34;  // J s
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double boltzmann = 1.380649e-23; // J / K
/// Bohr magneton, carrying the sign of the electron moment (mu_B < 0), so
/// that the 2^3S_1 moment is mu = -2 mu_B > 0.
inline constexpr double bohrMagneton = -9.2740100783e-24; // J / T

inline constexpr double gaussTesla = 1e-4;

constexpr double hartreeToMhz(double e) { return e * hartreeMhz; }
constexpr double mhzToHartree(double f) { return f / hartreeMhz; }
constexpr double ghzToHartree(double f) { return f * 1e3 / hartreeMhz; }
constexpr double hartreeToGhz(double e) { return e * hartreeMhz * 1e-3; }
constexpr double nmToBohr(double l) { return l / bohrNm; }
constexpr double bohrToNm(double l) { return l * bohrNm; }
/// Angular frequency (rad/s) to the atomic unit of inverse time.
constexpr double radPerSecondToAu(double w) { return w * atomicTimeSecond; }
constexpr double auToRadPerSecond(double w) { return w / atomicTimeSecond; }
/// Energy in joule to frequency in MHz (E / h).
constexpr double jouleToMhz(double e) { return e / planck * 1e-6; }
/// k_B T / h in MHz for a temperature in microkelvin.
constexpr double thermalMhz(double microKelvin) {
  return jouleToMhz(boltzmann * microKelvin * 1e-6);
}

} // namespace units

/// Single-atom fine-structure operator alpha L.S + beta (L.S)^2, hartree.
struct FineStructure {
  double alpha;
  double beta;

  /// Energy of the 2^3P_J level (J = 0, 1, 2) relative to the centroid-free
  /// origin of the operator; <L.S> = 1, -1, -2 for J = 2, 1, 0.
  double levelEnergy(int j) const {
    constexpr std::array<double, 3> ls{-2.0, -1.0, 1.0};
    const double x = ls.at(static_cast<std::size_t>(j));
    return alpha * x + beta * x * x;
  }
};

/// C3 = (3/4) hbar Gamma (lambda / 2 pi)^3, returned in hartree bohr^3.
/// `gamma` is in rad/s and `lambdaNm` in nm.
inline double c3FromGamma(double gamma, double lambdaNm) {
  if (!(lambdaNm > 0.0))
    throw DomainError("c3FromGamma: wavelength must be positive");
  if (gamma < 0.0)
    throw DomainError("c3FromGamma: decay rate must be non-negative");
  const double reducedWavelength =
      units::nmToBohr(lambdaNm) / (2.0 * std::numbers::pi);
  return 0.75 * units::radPerSecondToAu(gamma) * std::pow(reducedWavelength, 3);
}

/// Inverse of c3FromGamma: decay rate in rad/s.
inline double gammaFromC3(double c3, double lambdaNm) {
  if (!(c3 > 0.0))
    throw DomainError("gammaFromC3: C3 must be positive");
  if (!(lambdaNm > 0.0))
    throw DomainError("gammaFromC3: wavelength must be positive");
  const double reducedWavelength =
      units::nmToBohr(lambdaNm) / (2.0 * std::numbers::pi);
  return units::auToRadPerSecond(c3 / (0.75 * std::pow(reducedWavelength, 3)));
}

/// Phenomenological alpha, beta reproducing the two measured splittings
/// (inputs in GHz, outputs in hartree).
inline FineStructure fineStructureConstants(double delta21Ghz,
                                            double delta10Ghz) {
  if (!(delta21Ghz > 0.0) || !(delta10Ghz > 0.0))
    throw DomainError("fineStructureConstants: splittings must be positive");
  const double d21 = units::ghzToHartree(delta21Ghz);
  const double d10 = units::ghzToHartree(delta10Ghz);
  return {-d21 / 2.0, (2.0 * d10 - d21) / 6.0};
}

/// Immutable parameter set for one calculation. Defaults are the values used
/// throughout for 4He.
class PhysicalConstants {
public:
  static constexpr double defaultC3 = 6.405;
  static constexpr double defaultLambdaNm = 1083.3;
  static constexpr double defaultDelta21Ghz = 2.291175;
  static constexpr double defaultDelta10Ghz = 29.616950;
  static constexpr double defaultMassU = 4.002602;
  static constexpr double defaultC6Bound = 3265.0;

  PhysicalConstants()
      : PhysicalConstants(defaultC3, defaultLambdaNm, defaultDelta21Ghz,
                          defaultDelta10Ghz, defaultMassU) {}

  PhysicalConstants(double c3, double lambdaNm, double delta21Ghz,
                    double delta10Ghz, double massU)
      : c3_(c3), lambdaNm_(lambdaNm), delta21Ghz_(delta21Ghz),
        delta10Ghz_(delta10Ghz), massU_(massU),
        fineStructure_(fineStructureConstants(delta21Ghz, delta10Ghz)) {
    if (!(c3 > 0.0))
      throw DomainError("PhysicalConstants: C3 must be positive");
    if (!(lambdaNm > 0.0))
      throw DomainError("PhysicalConstants: wavelength must be positive");
    if (!(delta10Ghz > delta21Ghz))
      throw DomainError("PhysicalConstants: expected delta10 > delta21 > 0");
    if (!(massU > 0.0))
      throw DomainError("PhysicalConstants: mass must be positive");
  }

  /// Same set with C3 replaced (used by the C3 fit and sensitivity scans).
  PhysicalConstants withC3(double c3) const {
    return {c3, lambdaNm_, delta21Ghz_, delta10Ghz_, massU_};
  }

  double c3() const { return c3_; }
  double lambdaNm() const { return lambdaNm_; }
  double lambdaBohr() const { return units::nmToBohr(lambdaNm_); }
  /// Photon wavenumber k = 2 pi / lambda in inverse bohr.
  double waveNumber() const { return 2.0 * std::numbers::pi / lambdaBohr(); }
  /// Radiative decay rate of 2^3P implied by C3, rad/s.
  double gamma() const { return gammaFromC3(c3_, lambdaNm_); }
  double gammaOver2PiMhz() const {
    return gamma() / (2.0 * std::numbers::pi) * 1e-6;
  }
  double delta21Ghz() const { return delta21Ghz_; }
  double delta10Ghz() const { return delta10Ghz_; }
  double alpha() const { return fineStructure_.alpha; }
  double beta() const { return fineStructure_.beta; }
  const FineStructure &fineStructure() const { return fineStructure_; }

  double atomMassU() const { return massU_; }
  double atomMassKg() const { return massU_ * units::daltonKg; }
  double atomMassAu() const { return massU_ * units::daltonElectronMasses; }
  double reducedMassAu() const { return atomMassAu() / 2.0; }

  /// Magnetic moment of a trapped 2^3S_1 atom, mu = -2 mu_B (J/T, positive).
  double magneticMoment() const { return -2.0 * units::bohrMagneton; }
  /// mu / h in MHz per gauss.
  double magneticMomentMhzPerGauss() const {
    return units::jouleToMhz(magneticMoment() * units::gaussTesla);
  }

  double c6Bound() const { return defaultC6Bound; }

private:
  double c3_;
  double lambdaNm_;
  double delta21Ghz_;
  double delta10Ghz_;
  double massU_;
  FineStructure fineStructure_;
};

} // namespace lrdimer
