#ifndef DIOPH_DYADIC_HPP
#define DIOPH_DYADIC_HPP

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace dioph {

/// A dyadic rational mantissa * 2^exponent, kept normalized (odd mantissa, or
/// zero with exponent 0) so that equal values have equal representations.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(mpz_class mantissa, long exponent);
  explicit Dyadic(long value) : Dyadic(mpz_class(value), 0) {}

  [[nodiscard]] const mpz_class& mantissa() const { return mant_; }
  [[nodiscard]] long exponent() const { return exp_; }
  [[nodiscard]] int sign() const { return sgn(mant_); }
  [[nodiscard]] bool is_zero() const { return sgn(mant_) == 0; }

  /// Value scaled by 2^k.
  [[nodiscard]] Dyadic shifted(long k) const { return {mant_, exp_ + k}; }
  [[nodiscard]] Dyadic abs() const { return {::abs(mant_), exp_}; }

  /// floor(value * 2^bits) and ceil(value * 2^bits).
  [[nodiscard]] mpz_class floor_scaled(long bits) const;
  [[nodiscard]] mpz_class ceil_scaled(long bits) const;

  [[nodiscard]] mpq_class to_rational() const;
  [[nodiscard]] double to_double() const;

  /// Exact decimal expansion ("-0.15625", "3", "0"). Every dyadic has one.
  [[nodiscard]] std::string to_decimal() const;
  /// Inverse of to_decimal; throws InvalidArgument when the decimal is not a
  /// dyadic rational or is malformed.
  static Dyadic parse_decimal(std::string_view text);

  static Dyadic floor_of(const mpq_class& q, long bits);
  static Dyadic ceil_of(const mpq_class& q, long bits);

  friend Dyadic operator-(const Dyadic& a) { return {-a.mant_, a.exp_}; }
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return {a.mant_ * b.mant_, a.exp_ + b.exp_};
  }
  friend Dyadic operator*(const Dyadic& a, const mpz_class& k) { return {a.mant_ * k, a.exp_}; }

  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.mant_ == b.mant_;
  }

 private:
  mpz_class mant_{0};
  long exp_{0};
};

[[nodiscard]] inline const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
[[nodiscard]] inline const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

/// Closed interval [lower, upper] with dyadic endpoints.
class DyadicInterval {
 public:
  DyadicInterval() = default;
  explicit DyadicInterval(Dyadic point) : lo_(point), hi_(std::move(point)) {}
  DyadicInterval(Dyadic lower, Dyadic upper);

  /// [lo, hi] * 2^-scale with integer mantissas.
  static DyadicInterval from_scaled(const mpz_class& lo, const mpz_class& hi, long scale);

  [[nodiscard]] const Dyadic& lower() const { return lo_; }
  [[nodiscard]] const Dyadic& upper() const { return hi_; }
  [[nodiscard]] Dyadic width() const { return hi_ - lo_; }
  [[nodiscard]] bool is_exact() const { return lo_ == hi_; }

  [[nodiscard]] bool contains(const Dyadic& v) const { return lo_ <= v && v <= hi_; }
  [[nodiscard]] bool contains(const mpq_class& v) const;
  [[nodiscard]] bool subset_of(const DyadicInterval& other) const {
    return other.lo_ <= lo_ && hi_ <= other.hi_;
  }
  [[nodiscard]] bool intersects(const DyadicInterval& other) const {
    return !(hi_ < other.lo_ || other.hi_ < lo_);
  }
  /// Every point of *this is strictly below every point of other.
  [[nodiscard]] bool certainly_less(const DyadicInterval& other) const { return hi_ < other.lo_; }

  [[nodiscard]] double midpoint() const { return ((lo_ + hi_).shifted(-1)).to_double(); }

  friend DyadicInterval operator+(const DyadicInterval& a, const DyadicInterval& b) {
    return {a.lo_ + b.lo_, a.hi_ + b.hi_};
  }
  friend DyadicInterval operator-(const DyadicInterval& a, const DyadicInterval& b) {
    return {a.lo_ - b.hi_, a.hi_ - b.lo_};
  }
  friend DyadicInterval operator*(const DyadicInterval& a, const mpz_class& k);
  friend DyadicInterval operator*(const DyadicInterval& a, const DyadicInterval& b);
  friend bool operator==(const DyadicInterval& a, const DyadicInterval& b) = default;

  [[nodiscard]] DyadicInterval abs() const;

 private:
  Dyadic lo_;
  Dyadic hi_;
};

/// Pointwise maximum of two intervals (the interval of max(a, b)).
[[nodiscard]] DyadicInterval max(const DyadicInterval& a, const DyadicInterval& b);

}  // namespace dioph

#endif  // DIOPH_DYADIC_HPP
