// lrdimer: potential curves, vibrational spectra, C3/Gamma fit and
// photoassociation line-shift reduction for 4He* 2^3S + 2^3P long-range
// dimers.
//
// Exit status: 0 success, 2 usage error, 3 numerical convergence failure,
// 1 anything else. Errors go to stderr as "error[<kind>]: <message>".

#include "lrdimer/config.hpp"
#include "lrdimer/io.hpp"
#include "lrdimer/lineshift.hpp"
#include "lrdimer/potentials.hpp"
#include "lrdimer/radial.hpp"
#include "lrdimer/spectra.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace lrdimer;
using Json = nlohmann::ordered_json;

constexpr int exitUsage = 2;
constexpr int exitConvergence = 3;

struct Common {
  std::string constantsPath;
  std::string format = "csv";
  std::string out;
};

/// MHz at table precision, as a JSON number.
double mhz(double x) { return std::stod(io::significant(x, 4)); }
double bohr(double x) { return std::stod(io::fixed(x, 1)); }

class Output {
public:
  explicit Output(const std::string &path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_)
        throw UsageError("cannot write '" + path + "'");
    }
  }
  std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

void emitJson(const Common &c, const Json &j) {
  Output o(c.out);
  o.stream() << j.dump(2) << "\n";
}

std::pair<Parity, std::pair<int, Reflection>> parseBlock(const std::string &s) {
  if (s.size() < 2 || s[0] < '0' || s[0] > '3')
    throw UsageError("unknown block '" + s + "' (e.g. 0u+, 0g-, 1u, 2u, 3g)");
  const int omega = s[0] - '0';
  Parity p;
  if (s[1] == 'u')
    p = Parity::Ungerade;
  else if (s[1] == 'g')
    p = Parity::Gerade;
  else
    throw UsageError("unknown block '" + s + "': parity must be u or g");
  Reflection r = Reflection::None;
  if (s.size() == 3 && s[2] == '+')
    r = Reflection::Plus;
  else if (s.size() == 3 && s[2] == '-')
    r = Reflection::Minus;
  else if (s.size() != 2)
    throw UsageError("unknown block '" + s + "'");
  return {p, {omega, r}};
}

SpectrumSettings gridSettings(double rMin, double rMax, double step) {
  SpectrumSettings s;
  s.rMin = rMin;
  s.rMax = rMax;
  s.step = step;
  return s;
}

// ---------------------------------------------------------------------------

struct CurvesArgs {
  std::string block = "0u+";
  int J = 1;
  bool noRetardation = false, noRotation = false, noFineStructure = false;
  double rMin = 40.0, rMax = 20000.0, step = 0.5;
  int every = 1;
  std::optional<int> curve;
};

void runCurves(const Common &c, const CurvesArgs &a) {
  const auto pc = loadConstants(c.constantsPath);
  const auto [parity, rest] = parseBlock(a.block);
  const auto block = symmetryBlock(parity, rest.first, rest.second);
  HamiltonianFlags flags;
  flags.retarded = !a.noRetardation;
  flags.rotation = !a.noRotation;
  flags.fineStructure = !a.noFineStructure;
  if (a.every < 1)
    throw UsageError("--every must be >= 1");
  const auto curves =
      adiabaticCurves(block, a.J, defaultCurveGrid(a.rMin, a.rMax, a.step), flags, pc);
  if (a.curve && (*a.curve < 0 || *a.curve >= static_cast<int>(curves.size())))
    throw UsageError("--curve must lie in 0.." + std::to_string(curves.size() - 1));

  const auto labels = hundADecomposition(block, Eigen::VectorXd::Unit(block.dimension(), 0));
  if (c.format == "json") {
    Json j;
    j["block"] = block.name();
    j["J"] = a.J;
    j["flags"] = {{"retarded", flags.retarded}, {"rotation", flags.rotation},
                  {"fine_structure", flags.fineStructure}};
    j["curves"] = Json::array();
    for (const auto &cv : curves) {
      if (a.curve && cv.curveIndex != *a.curve)
        continue;
      Json jc;
      jc["curve"] = cv.curveIndex;
      jc["asymptote"] = "2S1+2P" + std::to_string(cv.asymptoteJ);
      jc["asymptote_energy_ghz"] = units::hartreeToGhz(cv.asymptoteEnergy);
      jc["well_depth_ghz"] = units::hartreeToGhz(wellMinimum(cv).depth);
      Json r = Json::array(), v = Json::array(), g = Json::array();
      for (std::size_t i = 0; i < cv.r.size(); i += static_cast<std::size_t>(a.every)) {
        r.push_back(cv.r[i]);
        v.push_back(units::hartreeToMhz(cv.values[i]));
        g.push_back(cv.radialCorrection[i]);
      }
      jc["R_a0"] = r;
      jc["V_MHz"] = v;
      jc["g_per_a0sq"] = g;
      j["curves"].push_back(jc);
    }
    emitJson(c, j);
    return;
  }
  Output o(c.out);
  auto &s = o.stream();
  s << "# block " << block.name() << ", J=" << a.J
    << ", retarded=" << flags.retarded << ", rotation=" << flags.rotation
    << ", fine_structure=" << flags.fineStructure << "\n";
  s << "curve,asymptote_J,R_a0,V_MHz,g_per_a0sq";
  for (const auto &[label, w] : labels)
    s << ",w_" << label.name();
  s << "\n";
  s.precision(10);
  for (const auto &cv : curves) {
    if (a.curve && cv.curveIndex != *a.curve)
      continue;
    for (std::size_t i = 0; i < cv.r.size(); i += static_cast<std::size_t>(a.every)) {
      s << cv.curveIndex << "," << cv.asymptoteJ << "," << cv.r[i] << ","
        << units::hartreeToMhz(cv.values[i]) << "," << cv.radialCorrection[i];
      for (const auto &[label, w] :
           hundADecomposition(block, cv.eigenvectors.col(static_cast<Eigen::Index>(i))))
        s << "," << w;
      s << "\n";
    }
  }
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
  std::string well = "0u+";
  int J = 1;
  bool noRetardation = false, noRadialCorrection = false, includeNearThreshold = false;
  double rMin = 40.0, rMax = 20000.0, step = 0.5;
  std::string wavefunctions;
};

void runSpectrum(const Common &c, const SpectrumArgs &a) {
  const auto pc = loadConstants(c.constantsPath);
  const Well w = parseWell(a.well);
  auto settings = gridSettings(a.rMin, a.rMax, a.step);
  settings.includeNearThreshold = a.includeNearThreshold;
  const ModelFlags flags{!a.noRetardation, !a.noRadialCorrection};
  const auto sol = solveWell(w, a.J, flags, pc, settings);
  const auto rows = rowsOf(sol, settings);

  if (!a.wavefunctions.empty()) {
    Output wf(a.wavefunctions);
    auto &s = wf.stream();
    s << "R_a0";
    for (const auto &l : sol.levels)
      if (settings.includeNearThreshold || !l.nearThreshold)
        s << ",u_v" << l.v;
    s << "\n";
    s.precision(10);
    for (std::size_t i = 0; i < sol.potential.r.size(); ++i) {
      s << sol.potential.r[i];
      for (const auto &l : sol.levels)
        if (settings.includeNearThreshold || !l.nearThreshold)
          s << "," << l.u[i];
      s << "\n";
    }
  }

  if (c.format == "json") {
    Json j;
    j["well"] = wellName(w);
    j["J"] = a.J;
    j["flags"] = {{"retarded", flags.retarded}, {"radial_correction", flags.radialCorrection}};
    j["r_max_a0"] = sol.rMax;
    j["levels"] = Json::array();
    for (const auto &r : rows)
      j["levels"].push_back({{"v", r.v}, {"E_MHz", mhz(r.energy)},
                             {"Rmin_a0", bohr(r.rMin)}, {"Rmax_a0", bohr(r.rMax)},
                             {"meanR_a0", bohr(r.meanR)}, {"near_threshold", r.nearThreshold}});
    emitJson(c, j);
    return;
  }
  Output o(c.out);
  auto &s = o.stream();
  s << "well,J,v,E_MHz,Rmin_a0,Rmax_a0,meanR_a0,near_threshold\n";
  for (const auto &r : rows)
    s << wellName(w) << "," << r.J << "," << r.v << "," << io::significant(r.energy)
      << "," << io::fixed(r.rMin) << "," << io::fixed(r.rMax) << ","
      << io::fixed(r.meanR) << "," << (r.nearThreshold ? 1 : 0) << "\n";
}

// ---------------------------------------------------------------------------

struct TableArgs {
  std::string well = "0u+";
  int J = 1;
  std::string in;
  double rMin = 40.0, rMax = 20000.0, step = 0.5;
};

void runTable1(const Common &c, const TableArgs &a) {
  const auto pc = loadConstants(c.constantsPath);
  const Well w = parseWell(a.well);
  const auto experiment = a.in.empty() ? measuredZeroUPlusLevels()
                                       : io::levelsFromCsv(io::readCsv(a.in));
  const auto rows = decomposedSpectrum(w, a.J, pc, gridSettings(a.rMin, a.rMax, a.step));
  const auto find = [&](int v) -> const ExperimentalLevel * {
    for (const auto &e : experiment)
      if (e.v == v)
        return &e;
    return nullptr;
  };
  if (c.format == "json") {
    Json j;
    j["well"] = wellName(w);
    j["J"] = a.J;
    j["rows"] = Json::array();
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      Json r{{"v", it->v}};
      if (const auto *e = find(it->v)) {
        r["experiment_MHz"] = e->energy;
        r["sigma_MHz"] = e->sigma;
      } else {
        r["experiment_MHz"] = nullptr;
        r["sigma_MHz"] = nullptr;
      }
      r["E_MHz"] = mhz(it->energy);
      r["epsRet_MHz"] = it->epsRet ? Json(mhz(*it->epsRet)) : Json(nullptr);
      r["epsRad_MHz"] = it->epsRad ? Json(mhz(*it->epsRad)) : Json(nullptr);
      j["rows"].push_back(r);
    }
    emitJson(c, j);
    return;
  }
  Output o(c.out);
  auto &s = o.stream();
  s << "v,experiment_MHz,sigma_MHz,E_MHz,epsRet_MHz,epsRad_MHz\n";
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    s << it->v << ",";
    if (const auto *e = find(it->v))
      s << e->energy << "," << e->sigma;
    else
      s << ",";
    s << "," << io::significant(it->energy) << ","
      << (it->epsRet ? io::significant(*it->epsRet, 3) : "") << ","
      << (it->epsRad ? io::significant(*it->epsRad, 3) : "") << "\n";
  }
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string in;
  std::string well = "0u+";
  int J = 1;
};

void runFit(const Common &c, const FitArgs &a) {
  const auto pc = loadConstants(c.constantsPath);
  const auto experiment = a.in.empty() ? measuredZeroUPlusLevels()
                                       : io::levelsFromCsv(io::readCsv(a.in));
  const auto fit = fitC3(experiment, pc, parseWell(a.well), a.J);
  Json j;
  j["c3_au"] = fit.c3;
  j["c3_sigma_au"] = fit.c3Sigma;
  j["gamma_mhz"] = fit.gamma;
  j["gamma_sigma_mhz"] = fit.gammaSigma;
  j["sensitivity_mhz_per_0.1pct"] = fit.sensitivity;
  j["chi2"] = fit.chi2;
  j["iterations"] = fit.iterations;
  j["residuals"] = Json::array();
  for (const auto &r : fit.residuals)
    j["residuals"].push_back({{"v", r.v}, {"experiment_MHz", r.experiment},
                              {"sigma_MHz", r.sigma}, {"model_MHz", mhz(r.model)},
                              {"residual_MHz", mhz(r.residual)}});
  emitJson(c, j);
}

// ---------------------------------------------------------------------------

struct ReduceArgs {
  std::string in;
  std::string scan;
  double b0 = 0.0, t = 0.0;
  std::optional<double> n;
  int v = 0;
  double scatteringLength = 20.0;
};

Json budgetJson(const ShiftBudget &b) {
  Json j{{"zeeman_MHz", b.zeeman},
         {"thermal_trap_MHz", b.thermalTrap},
         {"thermal_kinetic_MHz", b.thermalKinetic},
         {"correction_MHz", b.correction()},
         {"recoil_MHz", b.recoil},
         {"doppler_rms_MHz", b.dopplerWidth}};
  j["mean_field_bound_MHz"] = b.meanFieldBound ? Json(*b.meanFieldBound) : Json(nullptr);
  return j;
}

void runReduce(const Common &c, const ReduceArgs &a) {
  const auto pc = loadConstants(c.constantsPath);
  if (a.in.empty() == a.scan.empty())
    throw UsageError("reduce needs exactly one of --in (measurements) or --scan");
  std::vector<Measurement> ms;
  Json j;
  if (!a.scan.empty()) {
    const auto fit = lorentzianFit(io::scanFromCsv(io::readCsv(a.scan)));
    j["lorentzian"] = {{"center_MHz", fit.center},
                       {"center_sigma_MHz", std::sqrt(fit.covariance(0, 0))},
                       {"width_MHz", fit.width},
                       {"width_sigma_MHz", std::sqrt(fit.covariance(1, 1))},
                       {"amplitude", fit.amplitude},
                       {"offset", fit.offset}};
    Measurement m;
    m.deltaV = fit.center;
    m.b0 = a.b0;
    m.temperature = a.t;
    m.density = a.n;
    m.vLabel = a.v;
    ms.push_back(m);
  } else {
    ms = io::measurementsFromCsv(io::readCsv(a.in));
  }
  if (c.format == "csv" && a.scan.empty()) {
    Output o(c.out);
    auto &s = o.stream();
    s << "v,delta_MHz,b0_G,T_uK,zeeman_MHz,thermal_MHz,b_MHz\n";
    for (const auto &m : ms) {
      const auto b = shiftBudget(m, a.scatteringLength, pc);
      s << m.vLabel << "," << m.deltaV << "," << m.b0 << "," << m.temperature << ","
        << io::significant(b.zeeman) << ","
        << io::significant(b.thermalTrap + b.thermalKinetic) << ","
        << io::significant(bindingEnergy(m, pc)) << "\n";
    }
    return;
  }
  j["measurements"] = Json::array();
  for (const auto &m : ms) {
    Json jm{{"v", m.vLabel}, {"delta_MHz", m.deltaV}, {"b0_G", m.b0}, {"T_uK", m.temperature}};
    jm["budget"] = budgetJson(shiftBudget(m, a.scatteringLength, pc));
    jm["b_MHz"] = bindingEnergy(m, pc);
    j["measurements"].push_back(jm);
  }
  j["levels"] = Json::array();
  for (const auto &r : reduceByLevel(ms, pc))
    j["levels"].push_back({{"v", r.v}, {"b_MHz", r.bindingEnergy},
                           {"standard_error_MHz", r.standardError}, {"count", r.count}});
  emitJson(c, j);
}

struct BudgetArgs {
  double b0 = 0.0, t = 0.0;
  std::optional<double> n;
  double scatteringLength = 20.0;
};

void runBudget(const Common &c, const BudgetArgs &a) {
  const auto pc = loadConstants(c.constantsPath);
  Measurement m;
  m.b0 = a.b0;
  m.temperature = a.t;
  m.density = a.n;
  emitJson(c, budgetJson(shiftBudget(m, a.scatteringLength, pc)));
}

struct ZeemanArgs {
  std::string in;
};

void runZeeman(const Common &c, const ZeemanArgs &a) {
  const auto pc = loadConstants(c.constantsPath);
  const auto fit = zeemanSlopeFit(io::zeemanFromCsv(io::readCsv(a.in)), pc);
  emitJson(c, {{"slope_mu", fit.slope}, {"slope_sigma_mu", fit.slopeSigma},
               {"intercept_MHz", fit.intercept}, {"deviation_mu", fit.deviation},
               {"molecular_moment_bound_mu", fit.momentBound}});
}

struct ThermalArgs {
  double t = 10.0;
  std::size_t samples = 1000000;
  std::uint64_t seed = 20020101;
  unsigned streams = 4;
};

void runThermal(const Common &c, const ThermalArgs &a) {
  const auto r = thermalAverageOracle(a.t, a.samples, a.seed, a.streams);
  emitJson(c, {{"T_uK", a.t}, {"samples", r.samples}, {"seed", a.seed},
               {"expected_MHz", r.expected},
               {"trap_MHz", r.trap}, {"trap_sigma_MHz", r.trapSigma},
               {"kinetic_MHz", r.kinetic}, {"kinetic_sigma_MHz", r.kineticSigma},
               {"kinetic_unweighted_MHz", r.kineticUnweighted},
               {"kinetic_unweighted_sigma_MHz", r.kineticUnweightedSigma}});
}

struct C6Args {
  std::vector<double> radii{150.0};
};

void runC6(const Common &c, const C6Args &a) {
  const auto pc = loadConstants(c.constantsPath);
  Json j = Json::array();
  for (const auto &r : c6Bound(a.radii, pc))
    j.push_back({{"R_a0", r.r}, {"ratio", r.ratio}, {"violates", r.violates}});
  emitJson(c, j);
}

struct BlocksArgs {
  std::string parity = "u";
};

void runBlocks(const Common &c, const BlocksArgs &a) {
  const Parity parity = a.parity == "g" ? Parity::Gerade : Parity::Ungerade;
  Json j = Json::array();
  for (const auto &b : allBlocks(parity)) {
    Json labels = Json::array();
    for (const auto &l : b.hundALabels)
      labels.push_back(l.name());
    j.push_back({{"block", b.name()}, {"dimension", b.dimension()}, {"hund_a", labels}});
  }
  emitJson(c, j);
}

void addGrid(CLI::App *sub, double &rMin, double &rMax, double &step) {
  sub->add_option("--rmin", rMin, "inner grid edge, bohr")->capture_default_str();
  sub->add_option("--rmax", rMax, "outer grid edge, bohr (extended automatically when needed)")
      ->capture_default_str();
  sub->add_option("--step", step, "grid step, bohr")->capture_default_str();
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Purely long-range 4He* 2^3S+2^3P dimers: curves, spectra, "
               "C3/Gamma fit and photoassociation line-shift reduction"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer("Exit status: 0 ok, 2 usage error, 3 numerical convergence failure.\n"
             "File formats: docs/FORMATS.md.");
  Common common;
  app.add_option("--constants", common.constantsPath,
                 "JSON file overriding c3_au, gamma_mhz, lambda_nm, delta21_ghz, "
                 "delta10_ghz, mass_u");
  app.add_option("--format", common.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("-o,--out", common.out, "output file (default stdout)");

  CurvesArgs curves;
  auto *sc = app.add_subcommand("curves", "Adiabatic potential curves of one symmetry block");
  sc->add_option("--block", curves.block, "block: 0u+, 0u-, 1u, 2u, 3u (or g)")->capture_default_str();
  sc->add_option("--J", curves.J, "total angular momentum")->capture_default_str();
  sc->add_flag("--no-retardation", curves.noRetardation, "kR -> 0 dipole coupling");
  sc->add_flag("--no-rotation", curves.noRotation, "fixed nuclei (no rotational term)");
  sc->add_flag("--no-fine-structure", curves.noFineStructure, "drop the atomic fine structure");
  sc->add_option("--curve", curves.curve, "only this curve (0 = lowest at large R)");
  sc->add_option("--every", curves.every, "write every n-th grid point")->capture_default_str();
  addGrid(sc, curves.rMin, curves.rMax, curves.step);
  sc->footer("CSV columns: curve (index), asymptote_J (2^3P_J limit), R_a0 (bohr),\n"
             "V_MHz (relative to the curve's asymptote), g_per_a0sq (<phi|d2phi/dR2>,\n"
             "bohr^-2), w_<label> (Hund's case (a) weights, dimensionless).");

  SpectrumArgs spectrum;
  auto *ss = app.add_subcommand("spectrum", "Bound levels of a purely long-range well");
  ss->add_option("--well", spectrum.well, "0u+, 0u- or 2u")->capture_default_str();
  ss->add_option("--J", spectrum.J, "total angular momentum (odd for 0u+, even for 0u-, >=2 for 2u)")
      ->capture_default_str();
  ss->add_flag("--no-retardation", spectrum.noRetardation, "kR -> 0 dipole coupling");
  ss->add_flag("--no-radial-correction", spectrum.noRadialCorrection,
               "drop the adiabatic correction");
  ss->add_flag("--include-near-threshold", spectrum.includeNearThreshold,
               "also list levels within 0.5 MHz of the asymptote");
  ss->add_option("--wavefunctions", spectrum.wavefunctions,
                 "write u(R) to this CSV (R_a0, u_v<n> in bohr^-1/2)");
  addGrid(ss, spectrum.rMin, spectrum.rMax, spectrum.step);
  ss->footer("CSV columns: well, J, v, E_MHz (below the asymptote), Rmin_a0, Rmax_a0\n"
             "(classical turning points, bohr), meanR_a0 (<R>, bohr), near_threshold (0/1).");

  TableArgs table;
  auto *st = app.add_subcommand("table1", "Theory/experiment comparison with retardation and "
                                          "adiabatic-correction contributions");
  st->add_option("--well", table.well, "0u+, 0u- or 2u")->capture_default_str();
  st->add_option("--J", table.J, "total angular momentum")->capture_default_str();
  st->add_option("--in", table.in, "measured levels CSV (v, energy_mhz, sigma_mhz); "
                                   "default: built-in 0u+ J=1 values");
  addGrid(st, table.rMin, table.rMax, table.step);
  st->footer("CSV columns: v, experiment_MHz, sigma_MHz, E_MHz, epsRet_MHz\n"
             "(E - E with kR -> 0), epsRad_MHz (E - E without adiabatic correction).");

  FitArgs fit;
  auto *sf = app.add_subcommand("fit-gamma", "Fit C3 (and Gamma) to measured binding energies");
  sf->add_option("--in", fit.in, "CSV: v, energy_mhz, sigma_mhz; default: built-in 0u+ values");
  sf->add_option("--well", fit.well, "well the levels belong to")->capture_default_str();
  sf->add_option("--J", fit.J, "total angular momentum")->capture_default_str();
  sf->footer("JSON: c3_au, c3_sigma_au (atomic units), gamma_mhz and gamma_sigma_mhz\n"
             "(Gamma/2pi, MHz), sensitivity (largest level shift in MHz for +0.1% C3),\n"
             "chi2, residuals (experiment - model, MHz).");

  ReduceArgs reduce;
  auto *sr = app.add_subcommand("reduce", "Binding energies from measured line positions");
  sr->add_option("--in", reduce.in, "CSV: v, delta_mhz, b0_gauss, t_uk[, n_cm3]");
  sr->add_option("--scan", reduce.scan, "CSV: detuning_mhz, temperature_uk[, atoms, od]; "
                                        "the Lorentzian centre is reduced");
  sr->add_option("--b0", reduce.b0, "trap-bottom field for --scan, gauss");
  sr->add_option("--t", reduce.t, "temperature for --scan, uK");
  sr->add_option("--n", reduce.n, "density for --scan, cm^-3");
  sr->add_option("--v", reduce.v, "vibrational label for --scan");
  sr->add_option("--scattering-length", reduce.scatteringLength,
                 "bound on the scattering length, nm")->capture_default_str();
  sr->footer("CSV columns (with --in): v, delta_MHz, b0_G, T_uK, zeeman_MHz (2 mu B0),\n"
             "thermal_MHz (3 k_B T), b_MHz (binding energy). JSON adds the full budget\n"
             "and the mean binding energy per v.");

  BudgetArgs budget;
  auto *sb = app.add_subcommand("budget", "Shift and width budget for given conditions");
  sb->add_option("--b0", budget.b0, "trap-bottom field, gauss")->capture_default_str();
  sb->add_option("--t", budget.t, "temperature, uK")->capture_default_str();
  sb->add_option("--n", budget.n, "density, cm^-3 (enables the mean-field bound)");
  sb->add_option("--scattering-length", budget.scatteringLength, "nm")->capture_default_str();
  sb->footer("JSON, all in MHz: zeeman, thermal_trap, thermal_kinetic, correction (their sum),\n"
             "recoil, doppler_rms, mean_field_bound (null without --n).");

  ZeemanArgs zeeman;
  auto *sz = app.add_subcommand("zeeman", "Slope of line position against mu B0");
  sz->add_option("--in", zeeman.in, "CSV: b0_gauss, detuning_mhz[, sigma_mhz]")->required();
  sz->footer("JSON: slope_mu and slope_sigma_mu (dimensionless, units of mu B0/h),\n"
             "intercept_MHz, deviation_mu (-2 - slope), molecular_moment_bound_mu.");

  ThermalArgs thermal;
  auto *sm = app.add_subcommand("thermal", "Monte-Carlo check of the thermal line shifts");
  sm->add_option("--t", thermal.t, "temperature, uK")->capture_default_str();
  sm->add_option("--samples", thermal.samples, "sample count")->capture_default_str();
  sm->add_option("--seed", thermal.seed, "random seed")->capture_default_str();
  sm->add_option("--streams", thermal.streams, "independent random streams")->capture_default_str();
  sm->footer("JSON, MHz: expected ((3/2) k_B T), trap, kinetic, kinetic_unweighted and\n"
             "their statistical errors.");

  C6Args c6;
  auto *s6 = app.add_subcommand("c6", "Size of the neglected C6/R^6 term relative to C3/R^3");
  s6->add_option("--r", c6.radii, "radii, bohr")->capture_default_str();
  s6->footer("JSON: R_a0, ratio ((C6/R^6)/(C3/R^3)), violates (ratio > 1.5e-4 beyond 150 bohr).");

  BlocksArgs blocks;
  auto *sk = app.add_subcommand("blocks", "Debug dump of symmetry-block dimensions and labels");
  sk->add_option("--parity", blocks.parity, "u or g")
      ->check(CLI::IsMember({"u", "g"}))
      ->capture_default_str();
  sk->footer("JSON: block name, dimension and the Hund's (a) label of each basis column.");

  try {
    app.parse(argc, argv);
    if (sc->parsed())
      runCurves(common, curves);
    else if (ss->parsed())
      runSpectrum(common, spectrum);
    else if (st->parsed())
      runTable1(common, table);
    else if (sf->parsed())
      runFit(common, fit);
    else if (sr->parsed())
      runReduce(common, reduce);
    else if (sb->parsed())
      runBudget(common, budget);
    else if (sz->parsed())
      runZeeman(common, zeeman);
    else if (sm->parsed())
      runThermal(common, thermal);
    else if (s6->parsed())
      runC6(common, c6);
    else if (sk->parsed())
      runBlocks(common, blocks);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error[usage]: " << e.what() << "\n";
    return exitUsage;
  } catch (const StatisticsError &e) {
    std::cerr << "error[statistics]: " << e.what() << "\n";
    return exitUsage;
  } catch (const UsageError &e) {
    std::cerr << "error[usage]: " << e.what() << "\n";
    return exitUsage;
  } catch (const DomainError &e) {
    std::cerr << "error[domain]: " << e.what() << "\n";
    return exitUsage;
  } catch (const ConvergenceError &e) {
    std::cerr << "error[convergence]: " << e.what() << "\n";
    return exitConvergence;
  } catch (const std::exception &e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
