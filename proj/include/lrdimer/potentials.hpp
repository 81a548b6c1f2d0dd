#pragma once

// Fixed-nuclei Hamiltonian of one symmetry block (retarded dipole-dipole
// coupling + fine structure of both atoms + the Omega-conserving part of the
// nuclear rotation), its adiabatic eigenvalue curves with continuity-fixed
// eigenvectors, and the diagonal adiabatic correction <phi|d2phi/dR2>.

#include "lrdimer/basis.hpp"
#include "lrdimer/constants.hpp"
#include "lrdimer/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace lrdimer {

struct HamiltonianFlags {
  bool retarded = true;
  bool rotation = true;
  bool fineStructure = true;
};

/// cos x + x sin x
inline double retardationSigma(double kr) {
  return std::cos(kr) + kr * std::sin(kr);
}

/// cos x + x sin x - x^2 cos x
inline double retardationPi(double kr) {
  return std::cos(kr) + kr * std::sin(kr) - kr * kr * std::cos(kr);
}

/// Dipole-dipole energy of the Hund's (a) state (S, |Lambda|) with inversion
/// eigenvalue `inversion` (-1 for u, +1 for g), hartree.
///
///   Sigma:  +2 w (-1)^S C3/R^3 (cos kR + kR sin kR)
///   Pi:       -w (-1)^S C3/R^3 (cos kR + kR sin kR - (kR)^2 cos kR)
///
/// The overall sign follows from <B exc|V_dd|A exc> = -2 C3/R^3 (Sigma) and
/// +C3/R^3 (Pi) together with the inversion phase documented in basis.hpp,
/// so that 5Pi_u is repulsive and 5Sigma_u attractive.
inline double dipoleDipoleElement(double r, int spin, int lambdaAbs,
                                  int inversion, bool retarded,
                                  const PhysicalConstants &pc) {
  if (!(r > 0.0))
    throw DomainError("dipoleDipoleElement: R must be positive");
  if (spin < 0 || spin > 2 || lambdaAbs < 0 || lambdaAbs > 1 ||
      std::abs(inversion) != 1)
    throw UsageError("dipoleDipoleElement: invalid Hund's (a) label");
  const double kr = retarded ? pc.waveNumber() * r : 0.0;
  const double sym = inversion * ((spin % 2 == 0) ? 1.0 : -1.0);
  const double c3r3 = pc.c3() / (r * r * r);
  return lambdaAbs == 0 ? 2.0 * sym * c3r3 * retardationSigma(kr)
                        : -sym * c3r3 * retardationPi(kr);
}

/// Unit-amplitude pieces of the Hamiltonian, either on the 54-dimensional
/// product space or projected onto a block.
struct HamiltonianParts {
  Eigen::MatrixXd sigmaExchange; // multiplies C3/R^3 F_Sigma(kR)
  Eigen::MatrixXd piExchange;    // multiplies C3/R^3 F_Pi(kR)
  Eigen::MatrixXd fineStructure; // hartree
  /// L^2 + S^2 - 2 Jz^2 + 2 Lz Sz + L+S- + L-S+ (hbar = 1); the J(J+1) part
  /// is added separately.
  Eigen::MatrixXd rotation;
};

/// Pieces on the full product space.
inline HamiltonianParts productHamiltonianParts(const PhysicalConstants &pc) {
  using namespace operators;
  HamiltonianParts p;
  p.sigmaExchange = -2.0 * excitationExchange(0);
  p.piExchange = excitationExchange(1);
  const Matrix ls = spinOrbit();
  p.fineStructure = pc.alpha() * ls + pc.beta() * ls * ls;
  const Matrix lz = orbitalZ();
  const Matrix sz = spinZ();
  const Matrix lpsm = orbitalRaise() * spinLower();
  const Matrix jz = lz + sz;
  p.rotation = orbitalSquared() + totalSpinSquared() - 2.0 * jz * jz +
               2.0 * lz * sz + lpsm + lpsm.transpose();
  return p;
}

inline HamiltonianParts projectParts(const HamiltonianParts &full,
                                     const Eigen::MatrixXd &basis) {
  const auto project = [&](const Eigen::MatrixXd &m) -> Eigen::MatrixXd {
    Eigen::MatrixXd b = basis.transpose() * m * basis;
    return 0.5 * (b + b.transpose());
  };
  return {project(full.sigmaExchange), project(full.piExchange),
          project(full.fineStructure), project(full.rotation)};
}

inline Eigen::MatrixXd assemble(const HamiltonianParts &parts, double r, int j,
                                const HamiltonianFlags &flags,
                                const PhysicalConstants &pc) {
  const double kr = flags.retarded ? pc.waveNumber() * r : 0.0;
  const double c3r3 = pc.c3() / (r * r * r);
  Eigen::MatrixXd h = c3r3 * (retardationSigma(kr) * parts.sigmaExchange +
                              retardationPi(kr) * parts.piExchange);
  if (flags.fineStructure)
    h += parts.fineStructure;
  if (flags.rotation) {
    const double centrifugal = 1.0 / (2.0 * pc.reducedMassAu() * r * r);
    h += centrifugal *
         (parts.rotation +
          static_cast<double>(j * (j + 1)) *
              Eigen::MatrixXd::Identity(h.rows(), h.cols()));
  }
  return h;
}

/// Block Hamiltonian with its operator pieces projected once.
class BlockHamiltonian {
public:
  BlockHamiltonian(SymmetryBlock block, const PhysicalConstants &pc)
      : block_(std::move(block)), constants_(pc),
        parts_(projectParts(productHamiltonianParts(pc), block_.vectors)) {}

  const SymmetryBlock &block() const { return block_; }
  const PhysicalConstants &constants() const { return constants_; }
  const HamiltonianParts &parts() const { return parts_; }

  Eigen::MatrixXd at(double r, int j, const HamiltonianFlags &flags) const {
    if (!(r > 0.0))
      throw DomainError("hamiltonianMatrix: R must be positive");
    if (flags.rotation && j < block_.omega)
      throw UsageError("hamiltonianMatrix: J must be >= Omega (J=" +
                       std::to_string(j) +
                       ", Omega=" + std::to_string(block_.omega) + ")");
    return assemble(parts_, r, j, flags, constants_);
  }

  /// Separated-atom energies of the block (eigenvalues of the fine-structure
  /// part alone), ascending.
  Eigen::VectorXd asymptoticEnergies() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(parts_.fineStructure,
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

private:
  SymmetryBlock block_;
  PhysicalConstants constants_;
  HamiltonianParts parts_;
};

inline Eigen::MatrixXd hamiltonianMatrix(const SymmetryBlock &block, double r,
                                         int j, const HamiltonianFlags &flags,
                                         const PhysicalConstants &pc) {
  return BlockHamiltonian(block, pc).at(r, j, flags);
}

/// Hamiltonian on the whole 54-dimensional product space (used to check the
/// block structure), rotation taken with the given J for every Omega.
inline Eigen::MatrixXd productHamiltonian(double r, int j,
                                          const HamiltonianFlags &flags,
                                          const PhysicalConstants &pc) {
  if (!(r > 0.0))
    throw DomainError("productHamiltonian: R must be positive");
  return assemble(productHamiltonianParts(pc), r, j, flags, pc);
}

/// 2^3P_J level (0, 1 or 2) closest to a separated-atom energy.
inline int nearestAtomicLevel(double energy, const FineStructure &fs) {
  int best = 0;
  for (int j = 1; j <= 2; ++j)
    if (std::abs(energy - fs.levelEnergy(j)) <
        std::abs(energy - fs.levelEnergy(best)))
      best = j;
  return best;
}

// ---------------------------------------------------------------------------
// Radial grids.

inline std::vector<double> uniformGrid(double rMin, double rMax, double step) {
  if (!(rMin > 0.0) || !(rMax > rMin) || !(step > 0.0))
    throw DomainError("uniformGrid: need 0 < rMin < rMax and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((rMax - rMin) / step + 1e-9)) + 1;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i)
    r[i] = rMin + static_cast<double>(i) * step;
  return r;
}

/// 100 -> 20000 bohr: 0.5 bohr steps up to 3000 bohr, then steps growing
/// geometrically (ratio 1 + step/3000).
inline std::vector<double> defaultCurveGrid(double rMin = 100.0,
                                            double rMax = 20000.0,
                                            double step = 0.5,
                                            double rSwitch = 3000.0) {
  std::vector<double> r = uniformGrid(rMin, std::min(rSwitch, rMax), step);
  const double ratio = 1.0 + step / rSwitch;
  while (r.back() * ratio < rMax)
    r.push_back(r.back() * ratio);
  if (r.back() < rMax)
    r.push_back(rMax);
  return r;
}

// ---------------------------------------------------------------------------
// Adiabatic curves.

struct PotentialCurve {
  SymmetryBlock block;
  int J = 0;
  HamiltonianFlags flags;
  /// Position of the curve when the block eigenvalues are sorted ascending at
  /// the outer end of the grid.
  int curveIndex = 0;
  std::vector<double> r;
  /// Eigenvalue minus the separated-atom asymptote of the curve, hartree.
  std::vector<double> values;
  /// Block coordinates of the eigenvector, one column per grid point.
  Eigen::MatrixXd eigenvectors;
  /// Eigenvectors one step inside/outside the grid, for centred differences
  /// at the end points.
  double rGuardLow = 0.0, rGuardHigh = 0.0;
  Eigen::VectorXd guardLow, guardHigh;
  /// g(R) = <phi|d2phi/dR2>, bohr^-2.
  std::vector<double> radialCorrection;
  /// 2^3P_J level reached as R -> infinity and its energy (hartree).
  int asymptoteJ = 0;
  double asymptoteEnergy = 0.0;
};

/// Second-derivative route: g = <phi_i | phi''_i> with the three-point
/// non-uniform stencil, written with 1 - <phi_i|phi_j> = |phi_i - phi_j|^2/2
/// so that it is manifestly <= 0.
inline std::vector<double> radialCorrection(const PotentialCurve &curve) {
  const auto n = curve.r.size();
  if (n < 2 || static_cast<std::size_t>(curve.eigenvectors.cols()) != n)
    throw UsageError("radialCorrection: curve carries no eigenvectors");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rl = i == 0 ? curve.rGuardLow : curve.r[i - 1];
    const double rh = i + 1 == n ? curve.rGuardHigh : curve.r[i + 1];
    const Eigen::VectorXd &pl =
        i == 0 ? curve.guardLow
               : Eigen::VectorXd(curve.eigenvectors.col(static_cast<Eigen::Index>(i - 1)));
    const Eigen::VectorXd &ph =
        i + 1 == n ? curve.guardHigh
                   : Eigen::VectorXd(curve.eigenvectors.col(static_cast<Eigen::Index>(i + 1)));
    const Eigen::VectorXd p = curve.eigenvectors.col(static_cast<Eigen::Index>(i));
    const double h1 = curve.r[i] - rl;
    const double h2 = rh - curve.r[i];
    g[i] = -((p - pl).squaredNorm() / (h1 * (h1 + h2)) +
             (ph - p).squaredNorm() / (h2 * (h1 + h2)));
  }
  return g;
}

/// First-derivative route: -|dphi/dR|^2 with a centred difference. Agrees
/// with radialCorrection() to discretisation order.
inline std::vector<double> radialCorrectionFromGradient(const PotentialCurve &curve) {
  const auto n = curve.r.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rl = i == 0 ? curve.rGuardLow : curve.r[i - 1];
    const double rh = i + 1 == n ? curve.rGuardHigh : curve.r[i + 1];
    const Eigen::VectorXd pl =
        i == 0 ? curve.guardLow : Eigen::VectorXd(curve.eigenvectors.col(static_cast<Eigen::Index>(i - 1)));
    const Eigen::VectorXd ph =
        i + 1 == n ? curve.guardHigh : Eigen::VectorXd(curve.eigenvectors.col(static_cast<Eigen::Index>(i + 1)));
    g[i] = -((ph - pl) / (rh - rl)).squaredNorm();
  }
  return g;
}

namespace detail {

/// Inside clusters of (numerically) degenerate eigenvalues, rotate the
/// eigenvectors onto the previous point's vectors so that tracking stays
/// smooth.
inline void alignDegenerate(const Eigen::VectorXd &values,
                            Eigen::MatrixXd &vectors,
                            const Eigen::MatrixXd &previous) {
  const Eigen::Index d = values.size();
  const double scale = values.cwiseAbs().maxCoeff() + 1e-30;
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && values(end) - values(end - 1) < 1e-11 * scale)
      ++end;
    const Eigen::Index k = end - start;
    if (k > 1) {
      const Eigen::MatrixXd w = vectors.middleCols(start, k);
      // previous vectors best represented in this subspace
      std::vector<std::pair<double, Eigen::Index>> weight;
      for (Eigen::Index j = 0; j < previous.cols(); ++j)
        weight.push_back({(w.transpose() * previous.col(j)).squaredNorm(), j});
      std::sort(weight.begin(), weight.end(),
                [](const auto &a, const auto &b) { return a.first > b.first; });
      Eigen::MatrixXd target(w.rows(), k);
      for (Eigen::Index c = 0; c < k; ++c)
        target.col(c) = previous.col(weight[static_cast<std::size_t>(c)].second);
      // polar factor of W^T P gives the closest orthonormal rotation
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(w.transpose() * target,
                                            Eigen::ComputeFullU |
                                                Eigen::ComputeFullV);
      vectors.middleCols(start, k) =
          w * (svd.matrixU() * svd.matrixV().transpose());
    }
    start = end;
  }
}

} // namespace detail

/// All adiabatic curves of a block on the given grid. Eigenvalues are
/// followed by eigenvector overlap from the outer end inwards, so each curve
/// stays smooth through avoided crossings; each eigenvector's sign is fixed
/// by positive overlap with its neighbour. Throws RefinementError when the
/// best overlap between neighbours drops below `minOverlap`.
inline std::vector<PotentialCurve>
adiabaticCurves(const BlockHamiltonian &hamiltonian, int j,
                const std::vector<double> &grid, const HamiltonianFlags &flags,
                double minOverlap = 0.9) {
  const auto n = grid.size();
  if (n < 3)
    throw UsageError("adiabaticCurves: need at least three grid points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(grid[i] > grid[i - 1]))
      throw UsageError("adiabaticCurves: grid must be strictly increasing");
  if (!(grid.front() > 0.0))
    throw DomainError("adiabaticCurves: R must be positive");

  const SymmetryBlock &block = hamiltonian.block();
  const Eigen::Index d = block.dimension();

  // grid with one guard point on each side
  std::vector<double> ext;
  ext.reserve(n + 2);
  ext.push_back(grid[0] - std::min(grid[1] - grid[0], 0.5 * grid[0]));
  ext.insert(ext.end(), grid.begin(), grid.end());
  ext.push_back(grid[n - 1] + (grid[n - 1] - grid[n - 2]));
  const auto m = ext.size();

  std::vector<Eigen::VectorXd> values(m);
  std::vector<Eigen::MatrixXd> vectors(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  for (std::size_t i = 0; i < m; ++i) {
    es.compute(hamiltonian.at(ext[i], j, flags));
    values[i] = es.eigenvalues();
    vectors[i] = es.eigenvectors();
  }

  // curve c <- eigen-column order[i][c]
  Eigen::MatrixXd tracked = vectors[m - 1];
  Eigen::VectorXd trackedValues = values[m - 1];
  std::vector<Eigen::MatrixXd> curveVectors(m);
  std::vector<Eigen::VectorXd> curveValues(m);
  curveVectors[m - 1] = tracked;
  curveValues[m - 1] = trackedValues;

  for (std::size_t step = 1; step < m; ++step) {
    const std::size_t i = m - 1 - step;
    detail::alignDegenerate(values[i], vectors[i], tracked);
    const Eigen::MatrixXd overlap = (tracked.transpose() * vectors[i]).cwiseAbs();
    std::vector<bool> rowUsed(static_cast<std::size_t>(d), false);
    std::vector<bool> colUsed(static_cast<std::size_t>(d), false);
    Eigen::MatrixXd next(d, d);
    Eigen::VectorXd nextValues(d);
    for (Eigen::Index pick = 0; pick < d; ++pick) {
      double best = -1.0;
      Eigen::Index br = 0, bc = 0;
      for (Eigen::Index r = 0; r < d; ++r) {
        if (rowUsed[static_cast<std::size_t>(r)])
          continue;
        for (Eigen::Index c = 0; c < d; ++c)
          if (!colUsed[static_cast<std::size_t>(c)] && overlap(r, c) > best) {
            best = overlap(r, c);
            br = r;
            bc = c;
          }
      }
      if (best < minOverlap) {
        std::ostringstream msg;
        msg << "eigenvector continuity lost in block " << block.name()
            << " between R = " << ext[i] << " and " << ext[i + 1]
            << " bohr (overlap " << best << "); refine the grid";
        throw RefinementError(msg.str(), ext[i], ext[i + 1]);
      }
      rowUsed[static_cast<std::size_t>(br)] = true;
      colUsed[static_cast<std::size_t>(bc)] = true;
      Eigen::VectorXd v = vectors[i].col(bc);
      if (v.dot(tracked.col(br)) < 0.0)
        v = -v;
      next.col(br) = v;
      nextValues(br) = values[i](bc);
    }
    tracked = next;
    curveVectors[i] = next;
    curveValues[i] = nextValues;
  }

  const Eigen::VectorXd asymptotes = hamiltonian.asymptoticEnergies();
  const FineStructure &fs = hamiltonian.constants().fineStructure();
  std::vector<PotentialCurve> curves(static_cast<std::size_t>(d));
  for (Eigen::Index c = 0; c < d; ++c) {
    auto &curve = curves[static_cast<std::size_t>(c)];
    curve.block = block;
    curve.J = j;
    curve.flags = flags;
    curve.curveIndex = static_cast<int>(c);
    curve.r = grid;
    curve.asymptoteEnergy = asymptotes(c);
    curve.asymptoteJ = nearestAtomicLevel(asymptotes(c), fs);
    curve.values.resize(n);
    curve.eigenvectors.resize(d, static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      curve.values[i] = curveValues[i + 1](c) - curve.asymptoteEnergy;
      curve.eigenvectors.col(static_cast<Eigen::Index>(i)) =
          curveVectors[i + 1].col(c);
    }
    curve.rGuardLow = ext.front();
    curve.rGuardHigh = ext.back();
    curve.guardLow = curveVectors.front().col(c);
    curve.guardHigh = curveVectors.back().col(c);
    curve.radialCorrection = radialCorrection(curve);
  }
  return curves;
}

inline std::vector<PotentialCurve>
adiabaticCurves(const SymmetryBlock &block, int j,
                const std::vector<double> &grid, const HamiltonianFlags &flags,
                const PhysicalConstants &pc) {
  return adiabaticCurves(BlockHamiltonian(block, pc), j, grid, flags);
}

/// Smallest overlap between consecutive eigenvectors of a curve in [rLow, rHigh].
inline double minimumNeighbourOverlap(const PotentialCurve &curve, double rLow,
                                      double rHigh) {
  double worst = 1.0;
  for (std::size_t i = 1; i < curve.r.size(); ++i) {
    if (curve.r[i - 1] < rLow || curve.r[i] > rHigh)
      continue;
    worst = std::min(worst, curve.eigenvectors.col(static_cast<Eigen::Index>(i - 1))
                                .dot(curve.eigenvectors.col(static_cast<Eigen::Index>(i))));
  }
  return worst;
}

/// Depth of the deepest point below the curve's own asymptote (hartree,
/// positive for a bound well) and where it lies.
struct WellMinimum {
  double depth;
  double r;
};

inline WellMinimum wellMinimum(const PotentialCurve &curve) {
  const auto it = std::min_element(curve.values.begin(), curve.values.end());
  return {-*it, curve.r[static_cast<std::size_t>(it - curve.values.begin())]};
}

} // namespace lrdimer
