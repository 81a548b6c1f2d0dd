// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference numbers are the target tabulated values.

#include "support/fd_oracle.hpp"

#include "lrdimer/lineshift.hpp"
#include "lrdimer/potentials.hpp"
#include "lrdimer/radial.hpp"
#include "lrdimer/spectra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace lrdimer;

namespace {

const PhysicalConstants pc;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      detail << " " << what << ";";
    }
  }
};

double levelTolerance(double e) { return std::max(0.5, 0.005 * std::abs(e)); }

void compareLevels(Outcome &o, Well w, int j, const std::vector<double> &want) {
  const auto rows = computeSpectrum(w, j, {}, pc);
  if (rows.size() < want.size()) {
    o.require(false, wellName(w) + " has too few levels");
    return;
  }
  for (std::size_t v = 0; v < want.size(); ++v) {
    std::ostringstream s;
    s << wellName(w) << " v=" << v << " " << rows[v].energy << " vs " << want[v];
    o.require(std::abs(rows[v].energy - want[v]) <= levelTolerance(want[v]), s.str());
  }
}

Outcome fineStructureAsymptotes() {
  Outcome o;
  const FineStructure fs{pc.alpha(), pc.beta()};
  double sum[3] = {0, 0, 0};
  int count[3] = {0, 0, 0};
  for (const auto &b : allBlocks(Parity::Ungerade)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonianMatrix(b, 1e8, 3, {}, pc));
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      const double e = es.eigenvalues()(k);
      const int j = nearestAtomicLevel(e, fs);
      sum[j] += e;
      ++count[j];
    }
  }
  const auto mean = [&](int j) { return sum[j] / count[j]; };
  const double d21 = units::hartreeToGhz(mean(1) - mean(2));
  const double d10 = units::hartreeToGhz(mean(0) - mean(1));
  o.require(std::abs(d21 - 2.291175) <= 1e-6, "P1-P2 splitting " + std::to_string(d21));
  o.require(std::abs(d10 - 29.616950) <= 1e-6, "P0-P1 splitting " + std::to_string(d10));
  o.detail << " splittings " << d21 << " / " << d10 << " GHz";
  return o;
}

Outcome wellDepths() {
  Outcome o;
  const struct {
    Well well;
    double ghz;
  } cases[] = {{Well::ZeroUPlus, 2.130}, {Well::TwoU, 0.321}, {Well::ZeroUMinus, 0.054}};
  HamiltonianFlags fixed;
  fixed.rotation = false;
  for (const auto &c : cases) {
    const auto d = wellDefinition(c.well);
    const auto curves = adiabaticCurves(symmetryBlock(Parity::Ungerade, d.omega, d.reflection),
                                        d.omega, defaultCurveGrid(), fixed, pc);
    const double depth =
        units::hartreeToGhz(wellMinimum(curves.at(static_cast<std::size_t>(d.curveIndex))).depth);
    o.require(std::abs(depth - c.ghz) <= 0.01 * c.ghz,
              std::string(d.name) + " depth " + std::to_string(depth));
    o.detail << " " << d.name << "=" << depth;
  }
  return o;
}

Outcome zeroUPlusSpectrum() {
  Outcome o;
  compareLevels(o, Well::ZeroUPlus, 1, {-1418.0, -648.3, -252.9, -79.41, -18.12, -2.487});
  return o;
}

Outcome otherWells() {
  Outcome o;
  compareLevels(o, Well::ZeroUMinus, 2, {-7.304});
  compareLevels(o, Well::TwoU, 2, {-191.5, -72.32, -21.41, -4.584});
  return o;
}

Outcome sizes() {
  Outcome o;
  struct Row {
    Well well;
    int j, v;
    double rMin, rMax, meanR;
  };
  const Row table[] = {
      {Well::ZeroUPlus, 1, 5, 147.6, 2182, 1797}, {Well::ZeroUPlus, 1, 4, 147.7, 1122, 917},
      {Well::ZeroUPlus, 1, 3, 148.1, 689, 560},   {Well::ZeroUPlus, 1, 2, 149.5, 467, 379},
      {Well::ZeroUPlus, 1, 1, 152.9, 336, 276},   {Well::ZeroUPlus, 1, 0, 162.5, 246, 213},
      {Well::ZeroUMinus, 2, 0, 461.7, 970, 824},  {Well::TwoU, 2, 3, 320.5, 2097, 1712},
      {Well::TwoU, 2, 2, 322.5, 1231, 999},       {Well::TwoU, 2, 1, 329.3, 808, 659},
      {Well::TwoU, 2, 0, 351.1, 558, 477},
  };
  double worst = 0.0;
  for (const auto &t : table) {
    const auto r = computeSpectrum(t.well, t.j, {}, pc).at(static_cast<std::size_t>(t.v));
    for (auto [got, want] : {std::pair{r.rMin, t.rMin}, {r.rMax, t.rMax}, {r.meanR, t.meanR}}) {
      const double rel = std::abs(got - want) / want;
      worst = std::max(worst, rel);
      std::ostringstream s;
      s << wellName(t.well) << " v=" << t.v << " " << got << " vs " << want;
      o.require(rel <= 0.02, s.str());
    }
  }
  o.detail << " worst relative deviation " << worst;
  return o;
}

Outcome retardationColumn(const std::vector<SpectrumRow> &rows) {
  Outcome o;
  const double want[] = {-6.6, -5.2, -3.9, -2.6, -1.6, -0.78};
  o.require(rows.size() == 6, "expected six levels");
  for (std::size_t v = 0; v < std::min<std::size_t>(rows.size(), 6); ++v) {
    const double e = rows[v].epsRet.value_or(NAN);
    std::ostringstream s;
    s << "v=" << v << " " << e << " vs " << want[v];
    o.require(std::abs(e - want[v]) <= std::max(0.3, 0.15 * std::abs(want[v])), s.str());
    o.require(e < 0.0, "v=" + std::to_string(v) + " not negative");
    if (v > 0)
      o.require(std::abs(e) < std::abs(rows[v - 1].epsRet.value_or(NAN)),
                "not decreasing at v=" + std::to_string(v));
    o.detail << " " << e;
  }
  return o;
}

Outcome radialColumn(const std::vector<SpectrumRow> &rows) {
  Outcome o;
  const double want[] = {10.3, 5.3, 2.4, 0.95, 0.28, 0.053};
  o.require(rows.size() == 6, "expected six levels");
  for (std::size_t v = 0; v < std::min<std::size_t>(rows.size(), 6); ++v) {
    const double e = rows[v].epsRad.value_or(NAN);
    std::ostringstream s;
    s << "v=" << v << " " << e << " vs " << want[v];
    o.require(std::abs(e - want[v]) <= std::max(0.3, 0.20 * want[v]), s.str());
    o.require(e > 0.0, "v=" + std::to_string(v) + " not positive");
    if (v > 0)
      o.require(e < rows[v - 1].epsRad.value_or(NAN), "not decreasing at v=" + std::to_string(v));
    o.detail << " " << e;
  }
  return o;
}

Outcome sensitivityAndFit() {
  Outcome o;
  double worst = 0.0;
  for (const auto &d : c3Sensitivity(Well::ZeroUPlus, 1, pc)) {
    worst = std::max(worst, std::abs(d.value));
    std::ostringstream s;
    s << "+0.1% C3 moves v=" << d.v << " by " << std::abs(d.value) << " MHz";
    o.require(std::abs(d.value) <= 0.3, s.str());
  }
  const auto fit = fitC3(measuredZeroUPlusLevels(), pc);
  std::ostringstream s;
  s << "Gamma/2pi " << fit.gamma << " MHz";
  o.require(fit.gamma >= 1.622 && fit.gamma <= 1.628, s.str());
  o.detail << " max shift " << worst << " MHz, Gamma/2pi " << fit.gamma << " +- " << fit.gammaSigma;
  return o;
}

Outcome oracleEquivalence() {
  Outcome o;
  double worstFd = 0.0, worstHalving = 0.0;
  for (auto [w, j] : {std::pair{Well::ZeroUPlus, 1}, {Well::ZeroUMinus, 2}, {Well::TwoU, 2}}) {
    const auto coarse = solveWell(w, j, {true, true}, pc);
    std::vector<double> tabulated;
    for (const auto &l : coarse.levels)
      if (!l.nearThreshold)
        tabulated.push_back(l.energy);
    const auto fd = testsupport::finiteDifferenceLevels(coarse.potential, pc.reducedMassAu(),
                                                        -3000.0, -0.5);
    o.require(fd.size() == tabulated.size(), wellName(w) + " level count differs");
    for (std::size_t i = 0; i < std::min(fd.size(), tabulated.size()); ++i) {
      worstFd = std::max(worstFd, std::abs(fd[i] - tabulated[i]));
      o.require(std::abs(fd[i] - tabulated[i]) <= 0.05, wellName(w) + " v=" + std::to_string(i));
    }
    SpectrumSettings fine;
    fine.step = 0.25;
    fine.rMax = coarse.rMax;
    const auto refined = solveWell(w, j, {true, true}, pc, fine);
    for (std::size_t i = 0; i < tabulated.size(); ++i) {
      const double d = std::abs(refined.levels.at(i).energy - tabulated[i]);
      worstHalving = std::max(worstHalving, d);
      o.require(d <= 0.010, wellName(w) + " halving v=" + std::to_string(i));
    }
  }
  o.detail << " finite difference " << worstFd * 1e3 << " kHz, halving " << worstHalving * 1e3
           << " kHz";
  return o;
}

Outcome lineShift() {
  Outcome o;
  Measurement m;
  m.deltaV = -20.07;
  m.b0 = 0.0;
  m.temperature = 0.0;
  o.require(bindingEnergy(m, pc) == -20.07, "zero corrections not exact");
  m.b0 = 0.7;
  m.temperature = 8.0;
  const double expected = -20.07 + 2.0 * pc.magneticMomentMhzPerGauss() * 0.7 + 3.0 * units::thermalMhz(8.0);
  o.require(std::abs(bindingEnergy(m, pc) - expected) <= 1e-12, "affine law");

  m.temperature = 10.0;
  m.density = 1e14;
  const auto b = shiftBudget(m, 20.0, pc);
  o.require(std::abs(b.recoil - 0.021) <= 0.05 * 0.021, "recoil " + std::to_string(b.recoil * 1e3) + " kHz");
  o.require(std::abs(*b.meanFieldBound - 0.060) <= 0.05 * 0.060,
            "mean-field bound " + std::to_string(*b.meanFieldBound * 1e3) + " kHz vs 60 kHz");

  const auto t = thermalAverageOracle(10.0, 1000000);
  o.require(std::abs(t.trap - t.expected) <= 3.0 * t.trapSigma, "trap average");
  o.require(std::abs(t.kinetic - t.expected) <= 3.0 * t.kineticSigma, "kinetic average");
  o.detail << " recoil " << b.recoil * 1e3 << " kHz, mean field " << *b.meanFieldBound * 1e3
           << " kHz, trap " << (t.trap - t.expected) / t.trapSigma << " sigma, kinetic "
           << (t.kinetic - t.expected) / t.kineticSigma << " sigma";
  return o;
}

Outcome properties() {
  Outcome o;
  const auto maxAbs = [](const Eigen::MatrixXd &m) { return m.cwiseAbs().maxCoeff(); };
  const auto sub = symmetrize();
  const auto blocks = allBlocks(Parity::Ungerade);
  for (double r : {60.0, 150.0, 400.0, 5000.0}) {
    const Eigen::MatrixXd h = productHamiltonian(r, 2, {}, pc);
    const double scale = maxAbs(h);
    o.require(maxAbs(h - h.transpose()) <= 1e-14 * scale, "hermiticity");
    o.require(maxAbs(sub.ungerade.transpose() * h * sub.gerade) <= 1e-14 * scale, "u/g decoupling");
    for (std::size_t a = 0; a < blocks.size(); ++a)
      for (std::size_t c = a + 1; c < blocks.size(); ++c)
        o.require(maxAbs(blocks[a].vectors.transpose() * h * blocks[c].vectors) <= 1e-14 * scale,
                  "block-diagonality");
  }
  const auto n = static_cast<Eigen::Index>(productDimension);
  o.require(maxAbs(operators::orbitalSquared() - 2.0 * Eigen::MatrixXd::Identity(n, n)) <= 1e-14,
            "L^2 = 2");

  for (auto [w, j] : {std::pair{Well::ZeroUPlus, 1}, {Well::ZeroUMinus, 2}, {Well::TwoU, 2}}) {
    const auto sol = solveWell(w, j, {true, true}, pc);
    for (std::size_t a = 0; a < sol.levels.size(); ++a) {
      const auto &l = sol.levels[a];
      o.require(countNodes(l.u) == l.v, wellName(w) + " node count v=" + std::to_string(l.v));
      for (std::size_t c = a + 1; c < sol.levels.size(); ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < l.u.size(); ++i)
          s += l.u[i] * sol.levels[c].u[i];
        o.require(std::abs(s * l.gridStep) <= 1e-6, wellName(w) + " orthogonality");
      }
    }
    for (double g : sol.curve.radialCorrection)
      if (g > 0.0) {
        o.require(false, wellName(w) + " -g < 0");
        break;
      }
  }

  const auto rejects = [](Well w, int j) {
    try {
      checkStatistics(w, j);
    } catch (const StatisticsError &) {
      return true;
    }
    return false;
  };
  o.require(rejects(Well::ZeroUPlus, 2) && !rejects(Well::ZeroUPlus, 1) &&
                rejects(Well::ZeroUMinus, 1) && !rejects(Well::ZeroUMinus, 2),
            "Bose statistics gate");
  return o;
}

} // namespace

int main() {
  const auto decomposed = decomposedSpectrum(Well::ZeroUPlus, 1, pc);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"fine-structure asymptotes", fineStructureAsymptotes},
      {"fixed-nuclei well depths", wellDepths},
      {"0u+ J=1 spectrum", zeroUPlusSpectrum},
      {"0u- and 2u spectra", otherWells},
      {"turning points and sizes", sizes},
      {"retardation shifts", [&] { return retardationColumn(decomposed); }},
      {"adiabatic-correction shifts", [&] { return radialColumn(decomposed); }},
      {"C3 sensitivity and lifetime fit", sensitivityAndFit},
      {"solver oracle equivalence", oracleEquivalence},
      {"line-shift reduction", lineShift},
      {"property suite", properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    failures += !o.pass;
    std::printf("[%s] criterion %zu: %s:%s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.str().c_str());
  }
  std::printf("%zu of %zu criteria pass\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
