#include "dioph/dyadic.hpp"

#include <cctype>
#include <cmath>

#include "dioph/errors.hpp"

namespace dioph {

Dyadic::Dyadic(mpz_class mantissa, long exponent) : mant_(std::move(mantissa)), exp_(exponent) {
  if (sgn(mant_) == 0) {
    exp_ = 0;
    return;
  }
  auto tz = static_cast<long>(mpz_scan1(mant_.get_mpz_t(), 0));
  if (tz > 0) {
    mpz_fdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), static_cast<mp_bitcnt_t>(tz));
    exp_ += tz;
  }
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.exp_ == b.exp_) return {a.mant_ + b.mant_, a.exp_};
  const Dyadic& lo = a.exp_ < b.exp_ ? a : b;
  const Dyadic& hi = a.exp_ < b.exp_ ? b : a;
  mpz_class shifted;
  mpz_mul_2exp(shifted.get_mpz_t(), hi.mant_.get_mpz_t(),
               static_cast<mp_bitcnt_t>(hi.exp_ - lo.exp_));
  return {lo.mant_ + shifted, lo.exp_};
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  int sa = a.sign();
  int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  int c;
  if (a.exp_ == b.exp_) {
    c = cmp(a.mant_, b.mant_);
  } else if (a.exp_ > b.exp_) {
    mpz_class t;
    mpz_mul_2exp(t.get_mpz_t(), a.mant_.get_mpz_t(), static_cast<mp_bitcnt_t>(a.exp_ - b.exp_));
    c = cmp(t, b.mant_);
  } else {
    mpz_class t;
    mpz_mul_2exp(t.get_mpz_t(), b.mant_.get_mpz_t(), static_cast<mp_bitcnt_t>(b.exp_ - a.exp_));
    c = cmp(a.mant_, t);
  }
  return c <=> 0;
}

mpz_class Dyadic::floor_scaled(long bits) const {
  mpz_class r;
  long e = exp_ + bits;
  if (e >= 0) {
    mpz_mul_2exp(r.get_mpz_t(), mant_.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_fdiv_q_2exp(r.get_mpz_t(), mant_.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return r;
}

mpz_class Dyadic::ceil_scaled(long bits) const {
  mpz_class r;
  long e = exp_ + bits;
  if (e >= 0) {
    mpz_mul_2exp(r.get_mpz_t(), mant_.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_cdiv_q_2exp(r.get_mpz_t(), mant_.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return r;
}

mpq_class Dyadic::to_rational() const {
  mpq_class q(mant_);
  if (exp_ >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(exp_));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-exp_));
  }
  return q;
}

double Dyadic::to_double() const {
  long e = 0;
  double m = mpz_get_d_2exp(&e, mant_.get_mpz_t());
  return std::ldexp(m, static_cast<int>(e + exp_));
}

std::string Dyadic::to_decimal() const {
  if (exp_ >= 0) {
    mpz_class v;
    mpz_mul_2exp(v.get_mpz_t(), mant_.get_mpz_t(), static_cast<mp_bitcnt_t>(exp_));
    return v.get_str();
  }
  // m / 2^k = m * 5^k / 10^k
  auto k = static_cast<unsigned long>(-exp_);
  mpz_class five_k;
  mpz_ui_pow_ui(five_k.get_mpz_t(), 5, k);
  mpz_class digits = ::abs(mant_) * five_k;
  std::string s = digits.get_str();
  if (s.size() <= k) s.insert(0, k - s.size() + 1, '0');
  s.insert(s.size() - k, ".");
  if (sgn(mant_) < 0) s.insert(0, "-");
  return s;
}

Dyadic Dyadic::parse_decimal(std::string_view text) {
  std::string_view t = text;
  bool negative = false;
  if (!t.empty() && (t.front() == '-' || t.front() == '+')) {
    negative = t.front() == '-';
    t.remove_prefix(1);
  }
  if (t.empty()) throw InvalidArgument("empty decimal");
  std::string digits;
  long frac = 0;
  bool seen_point = false;
  for (char c : t) {
    if (c == '.') {
      if (seen_point) throw InvalidArgument("malformed decimal: " + std::string(text));
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      digits.push_back(c);
      if (seen_point) ++frac;
    } else {
      throw InvalidArgument("malformed decimal: " + std::string(text));
    }
  }
  if (digits.empty()) throw InvalidArgument("malformed decimal: " + std::string(text));
  mpz_class d(digits, 10);
  if (negative) d = -d;
  if (frac == 0) return {d, 0};
  mpz_class five_k;
  mpz_ui_pow_ui(five_k.get_mpz_t(), 5, static_cast<unsigned long>(frac));
  if (!mpz_divisible_p(d.get_mpz_t(), five_k.get_mpz_t())) {
    throw InvalidArgument("decimal is not a dyadic rational: " + std::string(text));
  }
  mpz_class m;
  mpz_divexact(m.get_mpz_t(), d.get_mpz_t(), five_k.get_mpz_t());
  return {m, -frac};
}

Dyadic Dyadic::floor_of(const mpq_class& q, long bits) {
  mpz_class num = q.get_num();
  if (bits >= 0) {
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  }
  mpz_class den = q.get_den();
  if (bits < 0) mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-bits));
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return {r, -bits};
}

Dyadic Dyadic::ceil_of(const mpq_class& q, long bits) {
  mpz_class num = q.get_num();
  if (bits >= 0) {
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  }
  mpz_class den = q.get_den();
  if (bits < 0) mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-bits));
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return {r, -bits};
}

DyadicInterval::DyadicInterval(Dyadic lower, Dyadic upper)
    : lo_(std::move(lower)), hi_(std::move(upper)) {
  if (hi_ < lo_) throw InvalidArgument("interval with lower > upper");
}

DyadicInterval DyadicInterval::from_scaled(const mpz_class& lo, const mpz_class& hi, long scale) {
  return {Dyadic(lo, -scale), Dyadic(hi, -scale)};
}

bool DyadicInterval::contains(const mpq_class& v) const {
  return lo_.to_rational() <= v && v <= hi_.to_rational();
}

DyadicInterval operator*(const DyadicInterval& a, const mpz_class& k) {
  if (sgn(k) >= 0) return {a.lo_ * k, a.hi_ * k};
  return {a.hi_ * k, a.lo_ * k};
}

DyadicInterval operator*(const DyadicInterval& a, const DyadicInterval& b) {
  Dyadic p1 = a.lo_ * b.lo_;
  Dyadic p2 = a.lo_ * b.hi_;
  Dyadic p3 = a.hi_ * b.lo_;
  Dyadic p4 = a.hi_ * b.hi_;
  return {min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4))};
}

DyadicInterval DyadicInterval::abs() const {
  if (lo_.sign() >= 0) return *this;
  if (hi_.sign() <= 0) return {-hi_, -lo_};
  return {Dyadic(), max(-lo_, hi_)};
}

DyadicInterval max(const DyadicInterval& a, const DyadicInterval& b) {
  return {max(a.lower(), b.lower()), max(a.upper(), b.upper())};
}

}  // namespace dioph
