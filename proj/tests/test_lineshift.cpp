#include "frozen.hpp"

#include "lrdimer/io.hpp"
#include "lrdimer/lineshift.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace lrdimer;

namespace {

const PhysicalConstants pc;

Measurement measurement(double delta, double b0, double t, int v = 4) {
  Measurement m;
  m.deltaV = delta;
  m.b0 = b0;
  m.temperature = t;
  m.vLabel = v;
  return m;
}

std::vector<ScanPoint> lorentzianScan(double c, double w, double a, double off, int n = 41) {
  std::vector<ScanPoint> s;
  for (int i = 0; i < n; ++i) {
    const double x = c - 4.0 * w + 8.0 * w * i / (n - 1);
    s.push_back({x, lorentzian(x, c, w, a, off)});
  }
  return s;
}

} // namespace

TEST(BindingEnergy, AffineLaw) {
  const double mu = pc.magneticMomentMhzPerGauss();
  EXPECT_DOUBLE_EQ(bindingEnergy(measurement(-20.07, 0.0, 0.0), pc), -20.07);
  const auto m = measurement(-20.07, 1.3, 12.0);
  EXPECT_NEAR(bindingEnergy(m, pc), -20.07 + 2.0 * mu * 1.3 + 3.0 * units::thermalMhz(12.0), 1e-12);
  // linear in each input separately
  const double base = bindingEnergy(m, pc);
  EXPECT_NEAR(bindingEnergy(measurement(-19.07, 1.3, 12.0), pc) - base, 1.0, 1e-12);
  EXPECT_NEAR(bindingEnergy(measurement(-20.07, 2.3, 12.0), pc) - base, 2.0 * mu, 1e-12);
  EXPECT_NEAR(bindingEnergy(measurement(-20.07, 1.3, 13.0), pc) - base, 3.0 * units::thermalMhz(1.0), 1e-12);
}

TEST(BindingEnergy, ThermalCorrectionAtThirtyMicrokelvin) {
  EXPECT_NEAR(bindingEnergy(measurement(-20.0, 0.0, 30.0), pc) + 20.0, oracle::threeKTAt30uK, 1e-9);
}

TEST(BindingEnergy, RejectsInvalidMeasurements) {
  EXPECT_THROW(bindingEnergy(measurement(1.0, 0.0, 0.0), pc), UsageError);
  EXPECT_THROW(bindingEnergy(measurement(-1.0, -0.1, 0.0), pc), UsageError);
  EXPECT_THROW(bindingEnergy(measurement(-1.0, 0.0, -1.0), pc), UsageError);
  auto m = measurement(-1.0, 0.0, 1.0);
  m.density = -1.0;
  EXPECT_THROW(bindingEnergy(m, pc), UsageError);
}

TEST(BindingEnergy, SyntheticV4DatasetReducesToItsLevel) {
  const auto ms = io::measurementsFromCsv(io::readCsv(std::string(LRDIMER_DATA_DIR) + "/v4_measurements.csv"));
  const auto levels = reduceByLevel(ms, pc);
  ASSERT_EQ(levels.size(), 1u);
  EXPECT_EQ(levels[0].v, 4);
  EXPECT_EQ(levels[0].count, ms.size());
  EXPECT_NEAR(levels[0].bindingEnergy, -18.2, 0.5);
  EXPECT_GT(levels[0].standardError, 0.0);
}

TEST(Budget, ReferenceValues) {
  auto m = measurement(-20.0, 0.0, 10.0);
  m.density = 1e14;
  const auto b = shiftBudget(m, 20.0, pc);
  EXPECT_NEAR(b.recoil, oracle::recoil, 1e-9);
  EXPECT_NEAR(b.dopplerWidth, oracle::dopplerRmsAt10uK, 1e-9);
  ASSERT_TRUE(b.meanFieldBound);
  EXPECT_NEAR(*b.meanFieldBound, oracle::meanFieldAt1e14And20nm, 1e-9);
  EXPECT_NEAR(b.thermalTrap, oracle::threeHalvesKTAt10uK, 1e-9);
  EXPECT_DOUBLE_EQ(b.thermalTrap, b.thermalKinetic);
  EXPECT_DOUBLE_EQ(b.zeeman, 0.0);
}

TEST(Budget, ScalingLaws) {
  const auto a = shiftBudget(measurement(-20.0, 1.0, 10.0), 20.0, pc);
  const auto b = shiftBudget(measurement(-20.0, 2.0, 20.0), 20.0, pc);
  EXPECT_NEAR(b.thermalTrap, 2.0 * a.thermalTrap, 1e-12);
  EXPECT_NEAR(b.thermalKinetic, 2.0 * a.thermalKinetic, 1e-12);
  EXPECT_NEAR(b.dopplerWidth, std::sqrt(2.0) * a.dopplerWidth, 1e-12);
  EXPECT_NEAR(b.zeeman, 2.0 * a.zeeman, 1e-12);
  EXPECT_DOUBLE_EQ(a.recoil, b.recoil);
  EXPECT_NEAR(a.correction(), a.zeeman + a.thermalTrap + a.thermalKinetic, 1e-15);
}

TEST(Budget, MeanFieldNeedsDensity) {
  const auto b = shiftBudget(measurement(-20.0, 0.0, 10.0), 20.0, pc);
  EXPECT_FALSE(b.meanFieldBound.has_value());
  auto m = measurement(-20.0, 0.0, 10.0);
  m.density = 2e14;
  EXPECT_NEAR(*shiftBudget(m, 20.0, pc).meanFieldBound, 2.0 * oracle::meanFieldAt1e14And20nm, 1e-9);
  EXPECT_THROW(shiftBudget(m, -1.0, pc), UsageError);
}

TEST(Lorentzian, NoiselessRecoveryIsExact) {
  const auto fit = lorentzianFit(lorentzianScan(-18.2, 2.8, 5.0, 3.0));
  EXPECT_NEAR(fit.center, -18.2, 1e-9);
  EXPECT_NEAR(fit.width, 2.8, 1e-9);
  EXPECT_NEAR(fit.amplitude, 5.0, 1e-9);
  EXPECT_NEAR(fit.offset, 3.0, 1e-9);
  EXPECT_LT(fit.rss, 1e-20);
}

TEST(Lorentzian, OrderOfPointsDoesNotMatter) {
  auto scan = lorentzianScan(-18.2, 2.8, 5.0, 3.0);
  std::reverse(scan.begin(), scan.end());
  EXPECT_NEAR(lorentzianFit(scan).center, -18.2, 1e-9);
}

TEST(Lorentzian, FivePercentNoise) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 0.05);
  double sum = 0.0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    auto scan = lorentzianScan(-18.2, 2.8, 5.0, 3.0, 33);
    for (auto &p : scan)
      p.signal *= 1.0 + noise(rng);
    const double err = lorentzianFit(scan).center + 18.2;
    sum += err * err;
  }
  EXPECT_LT(std::sqrt(sum / trials), 0.2);
}

TEST(Lorentzian, SyntheticScanFile) {
  const auto scan = io::scanFromCsv(io::readCsv(std::string(LRDIMER_DATA_DIR) + "/v4_scan.csv"));
  const auto fit = lorentzianFit(scan);
  EXPECT_NEAR(fit.center, -18.2, 0.5);
  EXPECT_NEAR(fit.width, 2.8, 0.5);
  EXPECT_GT(fit.covariance(0, 0), 0.0);
}

TEST(Lorentzian, NeedsFivePoints) {
  auto scan = lorentzianScan(-18.2, 2.8, 5.0, 3.0, 4);
  EXPECT_THROW(lorentzianFit(scan), UsageError);
}

TEST(Zeeman, ExactSlope) {
  const double mu = pc.magneticMomentMhzPerGauss();
  std::vector<ZeemanPoint> pts;
  for (double b : {0.5, 1.0, 2.0, 3.0})
    pts.push_back({b, -18.2 - 2.0 * mu * b, 0.0});
  const auto fit = zeemanSlopeFit(pts, pc);
  EXPECT_NEAR(fit.slope, -2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, -18.2, 1e-10);
  EXPECT_NEAR(fit.deviation, 0.0, 1e-12);
}

TEST(Zeeman, InjectedMolecularMoment) {
  const double mu = pc.magneticMomentMhzPerGauss();
  std::vector<ZeemanPoint> pts;
  // a moment m along the atomic ones steepens the slope to -(2 + m)
  for (double b : {0.5, 1.0, 1.5, 2.0, 3.0})
    pts.push_back({b, -18.2 - (2.0 + 0.01) * mu * b, 0.1});
  EXPECT_NEAR(zeemanSlopeFit(pts, pc).deviation, 0.01, 1e-12);
}

TEST(Zeeman, SlopeNearMinusTwoPointZeroTwo) {
  const auto fit = zeemanSlopeFit(io::zeemanFromCsv(io::readCsv(std::string(LRDIMER_DATA_DIR) + "/zeeman_points.csv")), pc);
  EXPECT_NEAR(fit.slope, -2.02, 0.02);
  EXPECT_NEAR(fit.slopeSigma, 0.02, 0.01);
  EXPECT_NEAR(fit.momentBound, 0.02, 0.01);
}

TEST(Zeeman, RankDeficientAbscissae) {
  EXPECT_THROW(zeemanSlopeFit({{1.0, -20.0}, {1.0, -21.0}, {1.0, -22.0}}, pc), FitError);
  EXPECT_THROW(zeemanSlopeFit({{1.0, -20.0}, {2.0, -21.0}, {1.0, -22.0}}, pc), UsageError);
}

TEST(ThermalOracle, AveragesHitThreeHalvesKT) {
  const auto t = thermalAverageOracle(10.0, 1000000);
  EXPECT_EQ(t.samples, 1000000u);
  EXPECT_NEAR(t.expected, oracle::threeHalvesKTAt10uK, 1e-9);
  EXPECT_NEAR(t.trap, t.expected, 3.0 * t.trapSigma);
  EXPECT_NEAR(t.kinetic, t.expected, 3.0 * t.kineticSigma);
  // without the q^2 weight the average is only k_B T / 2
  EXPECT_NEAR(t.kineticUnweighted, t.expected / 3.0, 3.0 * t.kineticUnweightedSigma);
}

TEST(ThermalOracle, ZeroTemperatureAndDeterminism) {
  const auto z = thermalAverageOracle(0.0, 10000);
  EXPECT_DOUBLE_EQ(z.trap, 0.0);
  EXPECT_DOUBLE_EQ(z.kinetic, 0.0);
  const auto a = thermalAverageOracle(5.0, 20000, 11);
  const auto b = thermalAverageOracle(5.0, 20000, 11);
  EXPECT_EQ(a.trap, b.trap);
  EXPECT_EQ(a.kinetic, b.kinetic);
  EXPECT_THROW(thermalAverageOracle(5.0, 100), UsageError);
  EXPECT_THROW(thermalAverageOracle(-1.0, 20000), UsageError);
}

TEST(Csv, ParsesCommentsAndBlankLines) {
  std::istringstream in("# comment\n\nv, energy_mhz ,sigma_mhz\n4,-18.2,0.5\n\n3,-79.6,0.5\n");
  const auto levels = io::levelsFromCsv(io::parseCsv(in, "mem"));
  ASSERT_EQ(levels.size(), 2u);
  EXPECT_EQ(levels[1].v, 3);
  EXPECT_DOUBLE_EQ(levels[1].energy, -79.6);
}

TEST(Csv, ReportsMalformedInput) {
  const auto parse = [](const std::string &text) {
    std::istringstream in(text);
    return io::parseCsv(in, "mem");
  };
  EXPECT_THROW(parse(""), UsageError);
  EXPECT_THROW(parse("a,b\n1\n"), UsageError);
  EXPECT_THROW(io::levelsFromCsv(parse("v,energy_mhz\n1,2\n")), UsageError);
  EXPECT_THROW(io::levelsFromCsv(parse("v,energy_mhz,sigma_mhz,x\n1,2,3,4\n")), UsageError);
  EXPECT_THROW(io::levelsFromCsv(parse("v,v,energy_mhz,sigma_mhz\n1,1,2,3\n")), UsageError);
  EXPECT_THROW(io::levelsFromCsv(parse("v,energy_mhz,sigma_mhz\n1,abc,3\n")), UsageError);
  EXPECT_THROW(io::readCsv("/nonexistent.csv"), UsageError);
}

TEST(Csv, OptionalDensityColumn) {
  std::istringstream in("v,delta_mhz,b0_gauss,t_uk,n_cm3\n4,-20,1,10,\n4,-21,1,10,1e14\n");
  const auto ms = io::measurementsFromCsv(io::parseCsv(in, "mem"));
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_FALSE(ms[0].density);
  EXPECT_DOUBLE_EQ(*ms[1].density, 1e14);
}

TEST(Format, SignificantFigures) {
  EXPECT_EQ(io::significant(-1417.54), "-1418");
  EXPECT_EQ(io::significant(-2.48181), "-2.482");
  EXPECT_EQ(io::significant(-648.12), "-648.1");
  EXPECT_EQ(io::significant(0.0533, 3), "0.0533");
  EXPECT_EQ(io::significant(0.0), "0");
  EXPECT_EQ(io::fixed(147.93), "147.9");
}
