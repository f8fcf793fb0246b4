#ifndef DIOPH_REALNUM_HPP
#define DIOPH_REALNUM_HPP

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "dioph/dyadic.hpp"
#include "dioph/polynomial.hpp"

namespace dioph {

/// A real number known exactly (rational), algebraically (minimal polynomial
/// plus an isolating interval), or as a decimal with declared error 10^-N.
/// Values are immutable; refinement never touches shared state.
class CertifiedReal {
 public:
  enum class Kind { rational, algebraic, decimal };

  struct Rational {
    mpq_class value;
  };
  struct Algebraic {
    IntPoly poly;
    mpq_class lo;
    mpq_class hi;
  };
  struct Decimal {
    std::string digits;   // as given, e.g. "0.333"
    mpq_class center;     // exact value of the digit string
    int error_digits = 0; // N: represented set is [center - 10^-N, center + 10^-N]
  };

  static CertifiedReal rational(mpq_class value);
  static CertifiedReal rational(long num, long den = 1);
  /// Validates that poly has exactly one real root in [lo, hi] and that the
  /// endpoints are not roots (tightening them when they are).
  static CertifiedReal algebraic(IntPoly poly, mpq_class lo, mpq_class hi);
  /// Error defaults to one unit in the last given digit.
  static CertifiedReal decimal(std::string_view digits, std::optional<int> error_digits = {});

  [[nodiscard]] Kind kind() const { return static_cast<Kind>(rep_.index()); }
  [[nodiscard]] bool is_exact_rational() const { return kind() == Kind::rational; }
  [[nodiscard]] const Rational& as_rational() const { return std::get<Rational>(rep_); }
  [[nodiscard]] const Algebraic& as_algebraic() const { return std::get<Algebraic>(rep_); }
  [[nodiscard]] const Decimal& as_decimal() const { return std::get<Decimal>(rep_); }

  /// Largest p for which refine(*this, p) succeeds; INT_MAX for exact kinds.
  [[nodiscard]] int max_bits() const;

  /// Canonical textual form, also used by the config format:
  /// "rational p/q", "algebraic coeffs=c0,c1,... lo=a hi=b", "decimal d [err=N]".
  [[nodiscard]] std::string describe() const;
  static CertifiedReal parse(std::string_view text);

 private:
  using Rep = std::variant<Rational, Algebraic, Decimal>;
  explicit CertifiedReal(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

/// Interval of width <= 2^-bits containing x. Throws PrecisionExhausted for a
/// decimal asked beyond its declared digits.
[[nodiscard]] DyadicInterval refine(const CertifiedReal& x, int bits);

struct NearestInt {
  mpz_class offset;       // y = -k where k is the nearest integer
  DyadicInterval dist;    // interval of |v - k|
};

/// Nearest integer of every point in v, or nullopt (ambiguous) when v
/// straddles a half-integer. Exact halves round up: k + 1/2 -> k + 1.
[[nodiscard]] std::optional<NearestInt> nearest_int_dist(const DyadicInterval& v);

enum class Ordering { less, greater, equal, undecided };
[[nodiscard]] std::string_view to_string(Ordering o);

using Refiner = std::function<DyadicInterval(int bits)>;

/// Compares two values given by intervals, re-producing them at doubling
/// precision (from start_bits up to cap_bits) while they overlap. A refiner
/// that throws PrecisionExhausted keeps its last interval.
[[nodiscard]] Ordering certified_compare(DyadicInterval a, DyadicInterval b, const Refiner& refine_a,
                                         const Refiner& refine_b, int cap_bits,
                                         int start_bits = 64);

/// certified_compare on two CertifiedReals, with an exact common-root test
/// for algebraic/rational pairs once bisection has stalled for
/// 4 * deg(a) * deg(b) rounds.
[[nodiscard]] Ordering compare(const CertifiedReal& a, const CertifiedReal& b, int cap_bits);

}  // namespace dioph

#endif  // DIOPH_REALNUM_HPP
