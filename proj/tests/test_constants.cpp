#include "frozen.hpp"

#include "lrdimer/angular.hpp"
#include "lrdimer/config.hpp"
#include "lrdimer/constants.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace lrdimer;

TEST(Units, ConversionsRoundTrip) {
  for (double x : {1e-9, 3.7e-7, 0.25}) {
    EXPECT_NEAR(units::mhzToHartree(units::hartreeToMhz(x)), x, 1e-15 * x);
    EXPECT_NEAR(units::ghzToHartree(units::hartreeToGhz(x)), x, 1e-15 * x);
    EXPECT_NEAR(units::nmToBohr(units::bohrToNm(x)), x, 1e-15 * x);
  }
  EXPECT_NEAR(units::hartreeToGhz(units::mhzToHartree(1000.0)), 1.0, 1e-12);
}

TEST(Units, ThermalEnergyMatchesReference) {
  EXPECT_NEAR(3.0 * units::thermalMhz(30.0), oracle::threeKTAt30uK, 1e-9);
  EXPECT_NEAR(1.5 * units::thermalMhz(10.0), oracle::threeHalvesKTAt10uK, 1e-9);
  EXPECT_DOUBLE_EQ(units::thermalMhz(0.0), 0.0);
}

TEST(Constants, GammaFromDefaultC3MatchesReference) {
  const PhysicalConstants pc;
  EXPECT_NEAR(pc.gammaOver2PiMhz(), oracle::gammaOver2PiMhz, 1e-8 * oracle::gammaOver2PiMhz);
}

TEST(Constants, C3GammaRoundTrip) {
  for (double c3 : {6.3, 6.405, 6.5}) {
    const double g = gammaFromC3(c3, 1083.3);
    EXPECT_NEAR(c3FromGamma(g, 1083.3), c3, 1e-13 * c3);
  }
}

TEST(Constants, MagneticMomentMatchesReference) {
  const PhysicalConstants pc;
  EXPECT_NEAR(pc.magneticMomentMhzPerGauss(), oracle::momentMhzPerGauss, 1e-8);
}

TEST(Constants, ReducedMassIsHalfTheAtomMass) {
  const PhysicalConstants pc;
  EXPECT_DOUBLE_EQ(pc.reducedMassAu(), pc.atomMassAu() / 2.0);
  EXPECT_NEAR(pc.atomMassAu(), 7296.3, 0.1);
}

TEST(Constants, FineStructureLevelsReproduceSplittings) {
  const PhysicalConstants pc;
  const FineStructure fs{pc.alpha(), pc.beta()};
  EXPECT_NEAR(units::hartreeToGhz(fs.levelEnergy(1) - fs.levelEnergy(2)), 2.291175, 1e-12);
  EXPECT_NEAR(units::hartreeToGhz(fs.levelEnergy(0) - fs.levelEnergy(1)), 29.616950, 1e-12);
}

// alpha L.S + beta (L.S)^2 on the nine |mL, mS> states of one 2^3P atom:
// five states at E(J=2), three at E(J=1), one at E(J=0).
TEST(Constants, SingleAtomFineStructureSpectrum) {
  const PhysicalConstants pc;
  Eigen::MatrixXd ls = Eigen::MatrixXd::Zero(9, 9);
  const auto idx = [](int ml, int ms) { return 3 * (ml + 1) + (ms + 1); };
  for (int ml = -1; ml <= 1; ++ml)
    for (int ms = -1; ms <= 1; ++ms) {
      ls(idx(ml, ms), idx(ml, ms)) += ml * ms;
      if (ml < 1 && ms > -1)
        ls(idx(ml + 1, ms - 1), idx(ml, ms)) +=
            0.5 * angular::ladder(1, ml, 1) * angular::ladder(1, ms, -1);
      if (ml > -1 && ms < 1)
        ls(idx(ml - 1, ms + 1), idx(ml, ms)) +=
            0.5 * angular::ladder(1, ml, -1) * angular::ladder(1, ms, 1);
    }
  const Eigen::MatrixXd h = pc.alpha() * ls + pc.beta() * ls * ls;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const auto e = es.eigenvalues();
  const FineStructure fs{pc.alpha(), pc.beta()};
  const double tol = units::mhzToHartree(1e-6);
  for (int i = 0; i < 5; ++i)
    EXPECT_NEAR(e(i), fs.levelEnergy(2), tol);
  for (int i = 5; i < 8; ++i)
    EXPECT_NEAR(e(i), fs.levelEnergy(1), tol);
  EXPECT_NEAR(e(8), fs.levelEnergy(0), tol);
}

TEST(Constants, RejectsUnphysicalValues) {
  EXPECT_THROW(PhysicalConstants(-1.0, 1083.3, 2.29, 29.6, 4.0), DomainError);
  EXPECT_THROW(PhysicalConstants(6.4, 0.0, 2.29, 29.6, 4.0), DomainError);
  EXPECT_THROW(PhysicalConstants(6.4, 1083.3, 29.6, 2.29, 4.0), DomainError);
  EXPECT_THROW(PhysicalConstants(6.4, 1083.3, 2.29, 29.6, 0.0), DomainError);
}

TEST(Constants, WithC3ChangesOnlyC3) {
  const PhysicalConstants pc;
  const auto other = pc.withC3(6.5);
  EXPECT_DOUBLE_EQ(other.c3(), 6.5);
  EXPECT_DOUBLE_EQ(other.lambdaNm(), pc.lambdaNm());
  EXPECT_DOUBLE_EQ(other.alpha(), pc.alpha());
  EXPECT_DOUBLE_EQ(other.beta(), pc.beta());
}

TEST(Config, EmptyObjectGivesDefaults) {
  const auto pc = constantsFromJson(nlohmann::json::object());
  EXPECT_DOUBLE_EQ(pc.c3(), PhysicalConstants::defaultC3);
  EXPECT_DOUBLE_EQ(pc.lambdaNm(), PhysicalConstants::defaultLambdaNm);
}

TEST(Config, GammaOverrideSetsC3) {
  const auto pc = constantsFromJson({{"gamma_mhz", oracle::gammaOver2PiMhz}});
  EXPECT_NEAR(pc.c3(), 6.405, 1e-7);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(constantsFromJson({{"c3", 6.4}}), UsageError);
  EXPECT_THROW(constantsFromJson({{"c3_au", "six"}}), UsageError);
  EXPECT_THROW(constantsFromJson(nlohmann::json::array()), UsageError);
  EXPECT_THROW(constantsFromJson({{"c3_au", -1.0}}), DomainError);
}

TEST(Config, RejectsInconsistentC3AndGamma) {
  EXPECT_THROW(constantsFromJson({{"c3_au", 6.5}, {"gamma_mhz", 1.6246}}), UsageError);
  const double c3 = c3FromGamma(2.0 * std::numbers::pi * 1.6246e6, 1083.3);
  EXPECT_NO_THROW(constantsFromJson({{"c3_au", c3}, {"gamma_mhz", 1.6246}}));
}

TEST(Config, LoadsFilesAndReportsErrors) {
  EXPECT_DOUBLE_EQ(loadConstants("").c3(), PhysicalConstants::defaultC3);
  EXPECT_THROW(loadConstants("/nonexistent/constants.json"), UsageError);
  const auto path = std::filesystem::temp_directory_path() / "lrdimer_bad_constants.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_THROW(loadConstants(path.string()), UsageError);
  std::filesystem::remove(path);
  const auto pc = loadConstants(std::string(LRDIMER_DATA_DIR) + "/constants_gamma.json");
  EXPECT_NEAR(pc.gammaOver2PiMhz(), 1.625, 1e-12);
}
