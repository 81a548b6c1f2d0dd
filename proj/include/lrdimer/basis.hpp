#pragma once

// Two-atom product basis for 2^3S + 2^3P, its inversion (g/u) and reflection
// (+/-) symmetry, and the Hund's case (a) states that diagonalise the
// dipole-dipole interaction.
//
// Canonical ordering of the 54 product states is lexicographic in
// (arrangement, mL, mSA, mSB) with arrangement A-excited first and every
// projection ascending from -1. Regression data and eigenvector continuity
// rely on this order.
//
// Phase conventions:
//  * inversion:  I |arr, mL, mSA, mSB> = -|arr', mL, mSB, mSA>
//    (odd P orbital, spins travel with the electrons), so that
//    I |A:0,0;B:1,mL> x |S,MS> = -(-1)^S |A:1,mL;B:0,0> x |S,MS>.
//  * reflection in the xz plane: (-1)^mL on the orbital, (-1)^(1-m) on each
//    spin, all projections negated. With this choice 1Sigma+ and 5Sigma+
//    (MS = 0) are "+" and 3Sigma+ (MS = 0) is "-".

#include "lrdimer/angular.hpp"
#include "lrdimer/errors.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace lrdimer {

inline constexpr std::size_t productDimension = 54;

enum class Arrangement { AExcited = 0, BExcited = 1 };

struct BasisVector {
  Arrangement arrangement;
  int mL;  // orbital projection of the P atom
  int mSA; // spin projection of atom A
  int mSB; // spin projection of atom B

  int omega() const { return mL + mSA + mSB; }
  /// Spin projection of whichever atom carries the P excitation.
  int excitedSpin() const {
    return arrangement == Arrangement::AExcited ? mSA : mSB;
  }
  bool operator==(const BasisVector &) const = default;
};

inline std::size_t productIndex(const BasisVector &b) {
  return static_cast<std::size_t>(b.arrangement) * 27 +
         static_cast<std::size_t>(b.mL + 1) * 9 +
         static_cast<std::size_t>(b.mSA + 1) * 3 +
         static_cast<std::size_t>(b.mSB + 1);
}

inline std::vector<BasisVector> buildProductBasis() {
  std::vector<BasisVector> basis;
  basis.reserve(productDimension);
  for (auto arr : {Arrangement::AExcited, Arrangement::BExcited})
    for (int mL = -1; mL <= 1; ++mL)
      for (int sa = -1; sa <= 1; ++sa)
        for (int sb = -1; sb <= 1; ++sb)
          basis.push_back({arr, mL, sa, sb});
  return basis;
}

enum class Parity { Ungerade, Gerade };
enum class Reflection { None, Plus, Minus };

/// Eigenvalue omega of the electronic inversion: -1 for u, +1 for g.
constexpr int inversionEigenvalue(Parity p) {
  return p == Parity::Ungerade ? -1 : 1;
}

inline std::string parityName(Parity p) {
  return p == Parity::Ungerade ? "u" : "g";
}

// ---------------------------------------------------------------------------
// Operators on the product space.

namespace operators {

using Matrix = Eigen::MatrixXd;

/// One term of an operator's action on a product state.
struct Image {
  double coefficient;
  BasisVector target;
};

inline bool inRange(int m) { return m >= -1 && m <= 1; }

/// Dense 54 x 54 matrix of an operator given by its action on basis states.
inline Matrix fromAction(
    const std::function<std::vector<Image>(const BasisVector &)> &action) {
  Matrix m = Matrix::Zero(productDimension, productDimension);
  for (const auto &b : buildProductBasis()) {
    const auto column = productIndex(b);
    for (const auto &[c, t] : action(b)) {
      if (inRange(t.mL) && inRange(t.mSA) && inRange(t.mSB))
        m(static_cast<Eigen::Index>(productIndex(t)),
          static_cast<Eigen::Index>(column)) += c;
    }
  }
  return m;
}

inline Matrix inversion() {
  return fromAction([](const BasisVector &b) -> std::vector<Image> {
    const auto other = b.arrangement == Arrangement::AExcited
                           ? Arrangement::BExcited
                           : Arrangement::AExcited;
    return {{-1.0, {other, b.mL, b.mSB, b.mSA}}};
  });
}

inline Matrix reflection() {
  return fromAction([](const BasisVector &b) -> std::vector<Image> {
    const auto sign = [](int p) { return (p % 2 == 0) ? 1.0 : -1.0; };
    const double phase =
        sign(std::abs(b.mL)) * sign(1 - b.mSA) * sign(1 - b.mSB);
    return {{phase, {b.arrangement, -b.mL, -b.mSA, -b.mSB}}};
  });
}

/// L.S of the excited atom (the S-state atom has L = 0), units of hbar^2.
inline Matrix spinOrbit() {
  return fromAction([](const BasisVector &b) {
    std::vector<Image> out;
    const int s = b.excitedSpin();
    out.push_back({static_cast<double>(b.mL * s), b});
    for (int step : {+1, -1}) {
      const double c =
          0.5 * angular::ladder(1, b.mL, step) * angular::ladder(1, s, -step);
      if (c == 0.0)
        continue;
      BasisVector t = b;
      t.mL += step;
      (b.arrangement == Arrangement::AExcited ? t.mSA : t.mSB) -= step;
      out.push_back({c, t});
    }
    return out;
  });
}

/// Molecular spin squared (S_A + S_B)^2, units of hbar^2.
inline Matrix totalSpinSquared() {
  const Matrix sasb = fromAction([](const BasisVector &b) {
    std::vector<Image> out{{static_cast<double>(b.mSA * b.mSB), b}};
    for (int step : {+1, -1}) {
      const double c = 0.5 * angular::ladder(1, b.mSA, step) *
                       angular::ladder(1, b.mSB, -step);
      if (c == 0.0)
        continue;
      out.push_back({c, {b.arrangement, b.mL, b.mSA + step, b.mSB - step}});
    }
    return out;
  });
  return 4.0 * Matrix::Identity(productDimension, productDimension) +
         2.0 * sasb;
}

/// Molecular orbital angular momentum squared. One atom is always in an S
/// state, so this is 2 hbar^2 times the identity; built from its components
/// so the identity can be checked rather than assumed.
inline Matrix orbitalSquared() {
  const Matrix lz = fromAction([](const BasisVector &b) -> std::vector<Image> {
    return {{static_cast<double>(b.mL), b}};
  });
  const Matrix lp = fromAction([](const BasisVector &b) -> std::vector<Image> {
    return {{angular::ladder(1, b.mL, +1),
             {b.arrangement, b.mL + 1, b.mSA, b.mSB}}};
  });
  const Matrix lm = lp.transpose();
  return lz * lz + 0.5 * (lp * lm + lm * lp);
}

inline Matrix orbitalZ() {
  return fromAction([](const BasisVector &b) -> std::vector<Image> {
    return {{static_cast<double>(b.mL), b}};
  });
}

inline Matrix spinZ() {
  return fromAction([](const BasisVector &b) -> std::vector<Image> {
    return {{static_cast<double>(b.mSA + b.mSB), b}};
  });
}

/// Omega = Lz + Sz (projection of the electronic angular momentum).
inline Matrix omega() { return orbitalZ() + spinZ(); }

inline Matrix orbitalRaise() {
  return fromAction([](const BasisVector &b) -> std::vector<Image> {
    return {{angular::ladder(1, b.mL, +1),
             {b.arrangement, b.mL + 1, b.mSA, b.mSB}}};
  });
}

inline Matrix spinLower() {
  return fromAction([](const BasisVector &b) -> std::vector<Image> {
    return {{angular::ladder(1, b.mSA, -1),
             {b.arrangement, b.mL, b.mSA - 1, b.mSB}},
            {angular::ladder(1, b.mSB, -1),
             {b.arrangement, b.mL, b.mSA, b.mSB - 1}}};
  });
}

/// Resonant excitation exchange between the atoms for a given |mL|, with unit
/// amplitude. Spin projections are untouched.
inline Matrix excitationExchange(int mLAbs) {
  return fromAction([mLAbs](const BasisVector &b) -> std::vector<Image> {
    if (std::abs(b.mL) != mLAbs)
      return {};
    const auto other = b.arrangement == Arrangement::AExcited
                           ? Arrangement::BExcited
                           : Arrangement::AExcited;
    return {{1.0, {other, b.mL, b.mSA, b.mSB}}};
  });
}

} // namespace operators

// ---------------------------------------------------------------------------
// Hund's case (a) states.

struct HundALabel {
  int spin;      // molecular S in {0, 1, 2}
  int lambdaAbs; // |Lambda| in {0, 1}
  Parity parity;

  std::string name() const {
    return std::to_string(2 * spin + 1) + (lambdaAbs == 0 ? "Sigma" : "Pi") +
           "_" + parityName(parity);
  }
  bool operator==(const HundALabel &) const = default;
};

struct HundAState {
  HundALabel label;
  int lambda; // signed Lambda = mL
  int ms;     // molecular spin projection
  Eigen::VectorXd vector;

  int omega() const { return lambda + ms; }
};

/// (1 + omega I_e)/sqrt(2) |A:0,0; B:1,Lambda> x |S,MS>, written out as
/// (|B excited> - omega (-1)^S |A excited>) / sqrt(2).
inline Eigen::VectorXd hundAVector(int spin, int ms, int lambda, Parity p) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(productDimension);
  const double w = inversionEigenvalue(p);
  const double exchangeSign = -w * ((spin % 2 == 0) ? 1.0 : -1.0);
  for (int ma = -1; ma <= 1; ++ma) {
    const int mb = ms - ma;
    if (mb < -1 || mb > 1)
      continue;
    const double cg = angular::clebschGordan(1, ma, 1, mb, spin, ms);
    if (cg == 0.0)
      continue;
    const auto bIdx = productIndex({Arrangement::BExcited, lambda, ma, mb});
    const auto aIdx = productIndex({Arrangement::AExcited, lambda, ma, mb});
    v(static_cast<Eigen::Index>(bIdx)) += cg / std::sqrt(2.0);
    v(static_cast<Eigen::Index>(aIdx)) += exchangeSign * cg / std::sqrt(2.0);
  }
  return v;
}

/// All 27 Hund's (a) states of one inversion symmetry, ordered by
/// (S, Lambda, MS) ascending.
inline std::vector<HundAState> hundAStates(Parity p) {
  std::vector<HundAState> states;
  for (int s = 0; s <= 2; ++s)
    for (int lambda = -1; lambda <= 1; ++lambda)
      for (int ms = -s; ms <= s; ++ms)
        states.push_back({{s, std::abs(lambda), p},
                          lambda,
                          ms,
                          hundAVector(s, ms, lambda, p)});
  return states;
}

/// Orthonormal bases (54 x 27 each) of the two inversion eigenspaces.
struct Subspaces {
  Eigen::MatrixXd ungerade;
  Eigen::MatrixXd gerade;
};

inline Eigen::MatrixXd stateMatrix(const std::vector<HundAState> &states) {
  Eigen::MatrixXd m(productDimension, static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i)
    m.col(static_cast<Eigen::Index>(i)) = states[i].vector;
  return m;
}

inline Subspaces symmetrize() {
  return {stateMatrix(hundAStates(Parity::Ungerade)),
          stateMatrix(hundAStates(Parity::Gerade))};
}

// ---------------------------------------------------------------------------
// Symmetry blocks.

struct SymmetryBlock {
  int omega = 0; // |Omega|; for Omega != 0 the +Omega representative
  Parity parity = Parity::Ungerade;
  Reflection reflection = Reflection::None;
  /// 54 x d, orthonormal columns.
  Eigen::MatrixXd vectors;
  /// Hund's (a) character of each column (each column is built from states
  /// of a single label).
  std::vector<HundALabel> hundALabels;

  Eigen::Index dimension() const { return vectors.cols(); }

  std::string name() const {
    std::string n = std::to_string(omega) + parityName(parity);
    if (reflection == Reflection::Plus)
      n += "+";
    else if (reflection == Reflection::Minus)
      n += "-";
    return n;
  }
};

inline SymmetryBlock symmetryBlock(Parity parity, int omega,
                                   Reflection reflection) {
  if (omega < 0 || omega > 3)
    throw UsageError("symmetryBlock: |Omega| must lie in 0..3");
  if (omega != 0 && reflection != Reflection::None)
    throw UsageError(
        "symmetryBlock: the +/- reflection label is only defined for Omega = 0");
  if (omega == 0 && reflection == Reflection::None)
    throw UsageError("symmetryBlock: Omega = 0 blocks need a +/- label");

  SymmetryBlock block;
  block.omega = omega;
  block.parity = parity;
  block.reflection = reflection;

  std::vector<Eigen::VectorXd> columns;
  const auto states = hundAStates(parity);
  if (omega != 0) {
    for (const auto &h : states) {
      if (h.omega() != omega)
        continue;
      columns.push_back(h.vector);
      block.hundALabels.push_back(h.label);
    }
  } else {
    const Eigen::MatrixXd sigma = operators::reflection();
    const double sign = reflection == Reflection::Plus ? 1.0 : -1.0;
    for (const auto &h : states) {
      if (h.omega() != 0)
        continue;
      Eigen::VectorXd v = 0.5 * (h.vector + sign * sigma * h.vector);
      for (const auto &c : columns)
        v -= c.dot(v) * c;
      const double norm = v.norm();
      if (norm < 1e-8)
        continue;
      columns.push_back(v / norm);
      block.hundALabels.push_back(h.label);
    }
  }
  block.vectors.resize(productDimension,
                       static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i)
    block.vectors.col(static_cast<Eigen::Index>(i)) = columns[i];
  return block;
}

/// Every distinct block of one parity: 0+, 0-, 1, 2, 3.
inline std::vector<SymmetryBlock> allBlocks(Parity parity) {
  return {symmetryBlock(parity, 0, Reflection::Plus),
          symmetryBlock(parity, 0, Reflection::Minus),
          symmetryBlock(parity, 1, Reflection::None),
          symmetryBlock(parity, 2, Reflection::None),
          symmetryBlock(parity, 3, Reflection::None)};
}

/// Squared projections of a block eigenvector onto the Hund's (a) labels of
/// its parity, summed over Lambda and MS. Labels with zero weight are kept
/// so every call returns the same six entries in the same order.
inline std::vector<std::pair<HundALabel, double>>
hundADecomposition(const SymmetryBlock &block,
                   const Eigen::VectorXd &eigenvector) {
  const Eigen::VectorXd full = block.vectors * eigenvector;
  std::vector<std::pair<HundALabel, double>> weights;
  for (int s = 0; s <= 2; ++s)
    for (int l = 0; l <= 1; ++l)
      weights.push_back({{s, l, block.parity}, 0.0});
  for (const auto &h : hundAStates(block.parity)) {
    const double p = h.vector.dot(full);
    for (auto &[label, w] : weights)
      if (label == h.label)
        w += p * p;
  }
  return weights;
}

} // namespace lrdimer
