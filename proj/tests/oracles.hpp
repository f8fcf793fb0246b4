#ifndef DIOPH_TESTS_ORACLES_HPP
#define DIOPH_TESTS_ORACLES_HPP

// Independent reference computations used by the tests. None of them call
// into the library.

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

/// Denominators of the continued-fraction convergents of sqrt(k) (k not a
/// square) up to T, from the periodic expansion computed in integers.
inline std::vector<std::int64_t> sqrt_convergent_denominators(std::int64_t k, std::int64_t T) {
  const auto a0 = static_cast<std::int64_t>(std::sqrt(static_cast<double>(k)));
  std::int64_t m = 0, d = 1, a = a0;
  std::int64_t q_prev = 0, q = 1;  // q_{-1}, q_0
  std::vector<std::int64_t> out{1};
  for (;;) {
    m = d * a - m;
    d = (k - m * m) / d;
    a = (a0 + m) / d;
    const std::int64_t next = a * q + q_prev;
    if (next > T) break;
    q_prev = q;
    q = next;
    if (q != out.back()) out.push_back(q);  // q_1 = q_0 = 1 when a_1 = 1
  }
  return out;
}

/// Closed-form bound functions (quadratic formula).
inline double g1(double a) {
  const double c2 = 2 * a * a - 2 * a + 1;
  return (a * (1 - a) + std::sqrt(a * a * (1 - a) * (1 - a) + 4 * a * c2)) / (2 * c2);
}
inline double g2(double a) { return std::sqrt(a + 1 / (a * a) - 1.75) + 1 / a - 0.5; }
inline double g3(double a) {
  return (1 - a + std::sqrt((1 - a) * (1 - a) + 4 * a * (2 * a * a - 2 * a + 1))) / (2 * a);
}

/// Determinant by cofactor expansion (small integer matrices).
inline long double det(const std::vector<std::vector<long double>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  long double s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<long double>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<long double> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(a[r][k]);
      }
      minor.push_back(row);
    }
    s += (c % 2 == 0 ? 1 : -1) * a[0][c] * det(minor);
  }
  return s;
}

/// Rank as the largest k with a nonzero k x k minor (exhaustive, tiny inputs).
inline int rank(const std::vector<std::vector<long double>>& rows) {
  if (rows.empty()) return 0;
  const std::size_t r = rows.size(), c = rows[0].size();
  int best = 0;
  for (std::size_t k = 1; k <= std::min(r, c); ++k) {
    std::vector<std::size_t> ri(k), ci(k);
    bool found = false;
    // iterate over subsets via bitmasks
    for (unsigned rm = 0; rm < (1u << r) && !found; ++rm) {
      if (static_cast<std::size_t>(__builtin_popcount(rm)) != k) continue;
      for (unsigned cm = 0; cm < (1u << c) && !found; ++cm) {
        if (static_cast<std::size_t>(__builtin_popcount(cm)) != k) continue;
        std::vector<std::vector<long double>> sub;
        for (std::size_t i = 0; i < r; ++i) {
          if (!(rm >> i & 1)) continue;
          std::vector<long double> row;
          for (std::size_t j = 0; j < c; ++j) {
            if (cm >> j & 1) row.push_back(rows[i][j]);
          }
          sub.push_back(row);
        }
        if (det(sub) != 0) found = true;
      }
    }
    if (found) best = static_cast<int>(k);
  }
  return best;
}

/// Distance to the nearest integer in long double.
inline long double dist(long double v) { return std::fabs(v - std::nearbyint(v)); }

/// Best approximations of a column (m = 1) in long double: heights where the
/// running minimum of max_j ||x theta_j|| strictly drops. Returns nullopt when
/// some comparison is closer than `margin` (then the check is skipped).
inline std::optional<std::vector<std::int64_t>> column_record_heights(
    const std::vector<long double>& theta, std::int64_t T, long double margin = 1e-15L) {
  std::vector<std::int64_t> out;
  long double best = 2;
  for (std::int64_t x = 1; x <= T; ++x) {
    long double z = 0;
    for (long double t : theta) z = std::max(z, dist(static_cast<long double>(x) * t));
    if (std::fabs(z - best) < margin) return std::nullopt;
    if (z < best) {
      best = z;
      out.push_back(x);
    }
  }
  return out;
}

}  // namespace oracle

#endif  // DIOPH_TESTS_ORACLES_HPP
