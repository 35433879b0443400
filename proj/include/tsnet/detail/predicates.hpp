#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

namespace tsnet::detail {

// Error-free transformations: a + b == s + e and a * b == p + e exactly
// (barring overflow/underflow).
inline void two_sum(double a, double b, double& s, double& e) noexcept {
  s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  e = (a - av) + (b - bv);
}

inline void two_prod(double a, double b, double& p, double& e) noexcept {
  p = a * b;
  e = std::fma(a, b, -p);
}

// Exact sign of the sum of `count` doubles. Builds a nonoverlapping
// expansion (increasing magnitude), whose top nonzero component carries the
// sign of the whole sum.
template <std::size_t Count>
int exact_sign_of_sum(const double (&terms)[Count]) noexcept {
  double expansion[Count];
  std::size_t len = 0;
  for (std::size_t t = 0; t < Count; ++t) {
    double q = terms[t];
    for (std::size_t i = 0; i < len; ++i) {
      double s, e;
      two_sum(q, expansion[i], s, e);
      expansion[i] = e;
      q = s;
    }
    expansion[len++] = q;
  }
  for (std::size_t i = len; i-- > 0;) {
    if (expansion[i] > 0.0) return 1;
    if (expansion[i] < 0.0) return -1;
  }
  return 0;
}

// True iff the point (n, yn) lies strictly below the segment joining (i, yi)
// and (j, yj), for integer positions i < n < j. Evaluated as the sign of
//   yi*(j-n) + yj*(n-i) - yn*(j-i)
// with a floating-point filter and an exact fallback, so every caller gets
// the same answer for the same triple, including exact ties.
inline bool strictly_below_chord(std::size_t i, double yi, std::size_t n, double yn, std::size_t j,
                                 double yj) noexcept {
  const double span = static_cast<double>(j - i);
  const double right = static_cast<double>(j - n);
  const double left = static_cast<double>(n - i);

  const double p1 = yi * right;
  const double p2 = yj * left;
  const double p3 = yn * span;
  const double det = (p1 + p2) - p3;
  const double magnitude = std::fabs(p1) + std::fabs(p2) + std::fabs(p3);
  constexpr double kErrBound = 4.0 * std::numeric_limits<double>::epsilon();
  if (std::fabs(det) > kErrBound * magnitude && magnitude > 1e-280) return det > 0.0;

  double terms[6];
  two_prod(yi, right, terms[0], terms[1]);
  two_prod(yj, left, terms[2], terms[3]);
  two_prod(-yn, span, terms[4], terms[5]);
  return exact_sign_of_sum(terms) > 0;
}

}  // namespace tsnet::detail
