#ifndef DIOPH_BOUNDS_HPP
#define DIOPH_BOUNDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "dioph/forms.hpp"

namespace dioph {

// Bound functions of the transference inequalities beta >= alpha * g(alpha),
// evaluated in long double with residual self-checks.
using real_t = long double;

/// Largest root of (2a^2 - 2a + 1) x^2 + a(a - 1) x - a = 0; a > 0.
[[nodiscard]] real_t eval_g1(real_t alpha);
/// sqrt(a + 1/a^2 - 7/4) + 1/a - 1/2; a >= 3. Satisfies
/// a g^2 + (a - 2) g - (a - 1)^2 = 0.
[[nodiscard]] real_t eval_g2(real_t alpha);
/// a - g2(a) - 1; a >= 3.
[[nodiscard]] real_t eval_h(real_t alpha);
/// Positive root of a x^2 + (a - 1) x - (2a^2 - 2a + 1) = 0; a >= 1.
[[nodiscard]] real_t eval_g3(real_t alpha);

/// Values of the defining polynomials, for residual checks.
[[nodiscard]] real_t g1_poly(real_t alpha, real_t x);
[[nodiscard]] real_t g2_poly(real_t alpha, real_t x);
[[nodiscard]] real_t g3_poly(real_t alpha, real_t x);

/// The unique real root of x^3 - x^2 + 2x - 1 (about 0.5698).
[[nodiscard]] real_t alpha0();

struct SysSolution {
  real_t gamma = 0;
  real_t delta = 0;
  /// 1 - alpha * delta is small, so gamma is large and ill-conditioned.
  bool near_singular = false;
};

/// Solution of the system
///   delta = 1/alpha + ((alpha - 1)/alpha) (delta/gamma),
///   delta = alpha / (gamma (1 - alpha) - alpha),
/// with delta = g1(alpha) and gamma = delta (1 - alpha) / (1 - alpha delta).
/// Domain [1/3, 1); throws SingularSystem when 1 - alpha delta vanishes.
[[nodiscard]] SysSolution solve_sys(real_t alpha);

/// Natural domain of alpha for each case: m1n3 [1/3, 1], m3n1 [3, inf),
/// m2n2 [1, inf).
[[nodiscard]] bool in_domain(CaseTag c, real_t alpha);

struct JarnikBound {
  real_t value = 0;
  /// False for m3n1 unless alpha > (5 m^2)^(m-1) = 2025.
  bool applicable = true;
};

/// Classical right-hand sides: m1n3 a^2/(1-a); m2n2 a(a-1); m3n1 a^(3/2) - 3a.
[[nodiscard]] JarnikBound rhs_jarnik(CaseTag c, real_t alpha);
/// The case's g function: g1, g2 or g3.
[[nodiscard]] real_t g_case(CaseTag c, real_t alpha);
/// alpha * g_case(alpha).
[[nodiscard]] real_t rhs_new(CaseTag c, real_t alpha);

enum class Winner { new_bound, jarnik, tie, only_new };
[[nodiscard]] std::string to_string(Winner w);

struct BoundRow {
  real_t alpha = 0;
  JarnikBound jarnik;
  real_t new_rhs = 0;
  Winner winner = Winner::tie;
};

/// Differences within this margin count as ties.
inline constexpr real_t kTieMargin = 1e-12L;

[[nodiscard]] std::vector<BoundRow> compare_bounds(CaseTag c, const std::vector<real_t>& grid);

/// Root of rhs_new - rhs_jarnik in [lo, hi] by bisection; the difference must
/// change sign on the interval.
[[nodiscard]] real_t find_crossing(CaseTag c, real_t lo, real_t hi);

/// n points evenly spaced on [lo, hi].
[[nodiscard]] std::vector<real_t> linear_grid(real_t lo, real_t hi, int n);

[[nodiscard]] std::string bounds_table_json(CaseTag c, const std::vector<BoundRow>& rows, bool pretty);
[[nodiscard]] std::string bounds_table_csv(const std::vector<BoundRow>& rows);

}  // namespace dioph

#endif  // DIOPH_BOUNDS_HPP
