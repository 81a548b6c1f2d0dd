#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace lrdimer::angular {

inline double factorial(int n) { return std::tgamma(n + 1.0); }

/// <j m +- 1 | J_+- | j m> / hbar.
inline double ladder(int j, int m, int step) {
  const int mNew = m + step;
  if (std::abs(mNew) > j)
    return 0.0;
  return std::sqrt(static_cast<double>(j * (j + 1) - m * mNew));
}

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> for integer angular
/// momenta (Racah's closed form, Condon-Shortley phase).
inline double clebschGordan(int j1, int m1, int j2, int m2, int J, int M) {
  if (m1 + m2 != M)
    return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(M) > J)
    return 0.0;
  if (J < std::abs(j1 - j2) || J > j1 + j2)
    return 0.0;

  const double prefactor =
      std::sqrt((2.0 * J + 1.0) * factorial(J + j1 - j2) *
                factorial(J - j1 + j2) * factorial(j1 + j2 - J) /
                factorial(j1 + j2 + J + 1)) *
      std::sqrt(factorial(J + M) * factorial(J - M) * factorial(j1 - m1) *
                factorial(j1 + m1) * factorial(j2 - m2) * factorial(j2 + m2));

  const int kMin = std::max({0, j2 - J - m1, j1 - J + m2});
  const int kMax = std::min({j1 + j2 - J, j1 - m1, j2 + m2});
  double sum = 0.0;
  for (int k = kMin; k <= kMax; ++k) {
    const double term =
        factorial(k) * factorial(j1 + j2 - J - k) * factorial(j1 - m1 - k) *
        factorial(j2 + m2 - k) * factorial(J - j2 + m1 + k) *
        factorial(J - j1 - m2 + k);
    sum += ((k % 2 == 0) ? 1.0 : -1.0) / term;
  }
  return prefactor * sum;
}

} // namespace lrdimer::angular
