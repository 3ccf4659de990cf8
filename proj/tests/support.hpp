#pragma once

// Shared helpers for the test suites: chi-square tail probabilities for
// distribution checks and permutation ranking for uniformity tests.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace testsupport {

namespace detail {

// Regularized lower incomplete gamma P(a, x) by power series; converges
// quickly for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (term < sum * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by Lentz's continued fraction;
// converges quickly for x >= a + 1.
inline double gamma_q_continued_fraction(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k < 10000; ++k) {
    const double an = -k * (k - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

/// Upper-tail p-value of a chi-square statistic with `dof` degrees of
/// freedom: P[X >= chi2].
inline double chi_square_p_value(double chi2, int dof) {
  if (chi2 <= 0.0) return 1.0;
  const double a = dof / 2.0;
  const double x = chi2 / 2.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_continued_fraction(a, x);
}

/// Lexicographic rank of a permutation of {0..n-1}, in [0, n!). Lets a
/// uniformity test bucket whole permutations.
inline std::size_t lehmer_index(const std::vector<std::uint32_t>& perm) {
  std::size_t rank = 0;
  const std::size_t n = perm.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t smaller_after = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (perm[j] < perm[i]) ++smaller_after;
    }
    rank = rank * (n - i) + smaller_after;
  }
  return rank;
}

/// Chi-square statistic for observed counts against a uniform expectation.
inline double uniform_chi_square(const std::vector<std::size_t>& counts,
                                 double total) {
  const double expected = total / static_cast<double>(counts.size());
  double chi2 = 0.0;
  for (const std::size_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  return chi2;
}

}  // namespace testsupport
