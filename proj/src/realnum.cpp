#include "dioph/realnum.hpp"

#include <algorithm>
#include <climits>
#include <sstream>
#include <vector>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

// Parses "p/q", "p", or a plain decimal such as "-1.25" into an exact rational.
mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InvalidArgument("empty rational");
  try {
    if (s.find('.') != std::string::npos) {
      bool neg = s.front() == '-';
      std::string body = (neg || s.front() == '+') ? s.substr(1) : s;
      auto dot = body.find('.');
      std::string digits = body.substr(0, dot) + body.substr(dot + 1);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
        throw InvalidArgument("malformed number: " + s);
      }
      mpz_class num(digits, 10);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, body.size() - dot - 1);
      mpq_class q(neg ? mpz_class(-num) : num, den);
      q.canonicalize();
      return q;
    }
    if (s.find_first_not_of("+-0123456789/") != std::string::npos) {
      throw InvalidArgument("malformed number: " + s);
    }
    if (s.front() == '+') s.erase(0, 1);
    mpq_class q(s, 10);
    if (sgn(q.get_den()) == 0) throw InvalidArgument("zero denominator: " + std::string(text));
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("malformed number: " + s);
  }
}

std::string rational_string(const mpq_class& q) { return q.get_str(); }

bool is_power_of_two(const mpz_class& v) { return sgn(v) > 0 && mpz_popcount(v.get_mpz_t()) == 1; }

DyadicInterval refine_rational(const mpq_class& q, int bits) {
  if (is_power_of_two(q.get_den())) {
    auto k = static_cast<long>(mpz_scan1(q.get_den_mpz_t(), 0));
    return DyadicInterval(Dyadic(q.get_num(), -k));
  }
  return {Dyadic::floor_of(q, bits), Dyadic::ceil_of(q, bits)};
}

// Sign of f(n / d) for d > 0, without normalizing the fraction.
int sign_at_fraction(const IntPoly& f, const mpz_class& n, const mpz_class& d) {
  const int deg = degree(f);
  mpz_class acc = f[static_cast<std::size_t>(deg)];
  mpz_class dpow = 1;
  for (int i = deg - 1; i >= 0; --i) {
    dpow *= d;
    acc = acc * n + f[static_cast<std::size_t>(i)] * dpow;
  }
  return sgn(acc);
}

DyadicInterval refine_algebraic(const CertifiedReal::Algebraic& a, int bits) {
  // Work on [A/D, B/D]; each bisection doubles D so no gcds are needed.
  mpz_class den;
  mpz_lcm(den.get_mpz_t(), a.lo.get_den_mpz_t(), a.hi.get_den_mpz_t());
  mpz_class lo = a.lo.get_num() * (den / a.lo.get_den());
  mpz_class hi = a.hi.get_num() * (den / a.hi.get_den());
  const int sign_lo = sign_at(a.poly, a.lo);
  const auto target = static_cast<mp_bitcnt_t>(bits + 2);
  mpz_class scaled_width;
  mpz_class mid;
  mpz_class den2;
  while (true) {
    mpz_mul_2exp(scaled_width.get_mpz_t(), mpz_class(hi - lo).get_mpz_t(), target);
    if (scaled_width <= den) break;
    mid = lo + hi;
    den2 = den * 2;
    int s = sign_at_fraction(a.poly, mid, den2);
    if (s == 0) {
      // the root is the rational mid / den2
      mpq_class r(mid, den2);
      r.canonicalize();
      return refine_rational(r, bits);
    }
    if (s == sign_lo) {
      lo = mid;
      hi *= 2;
    } else {
      hi = mid;
      lo *= 2;
    }
    den = std::move(den2);
  }
  mpq_class qlo(lo, den);
  mpq_class qhi(hi, den);
  qlo.canonicalize();
  qhi.canonicalize();
  return {Dyadic::floor_of(qlo, static_cast<long>(target)),
          Dyadic::ceil_of(qhi, static_cast<long>(target))};
}

int decimal_max_bits(int error_digits) {
  if (error_digits <= 0) return 0;
  mpz_class ten_n;
  mpz_ui_pow_ui(ten_n.get_mpz_t(), 10, static_cast<unsigned long>(error_digits));
  // largest p with 2^(p+1) <= 10^N
  return static_cast<int>(mpz_sizeinbase(ten_n.get_mpz_t(), 2)) - 2;
}

DyadicInterval refine_decimal(const CertifiedReal::Decimal& d, int bits) {
  if (bits > decimal_max_bits(d.error_digits)) {
    throw PrecisionExhausted("decimal constant " + d.digits + " supports at most " +
                             std::to_string(decimal_max_bits(d.error_digits)) +
                             " bits, asked for " + std::to_string(bits));
  }
  mpz_class ten_n;
  mpz_ui_pow_ui(ten_n.get_mpz_t(), 10, static_cast<unsigned long>(d.error_digits));
  mpq_class err(1, ten_n);
  err.canonicalize();
  mpq_class lo = d.center - err;
  mpq_class hi = d.center + err;
  mpq_class budget(1);
  mpq_div_2exp(budget.get_mpq_t(), budget.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
  budget -= 2 * err;  // > 0 since 2^-bits > 2*10^-N strictly
  long grid = bits + 2;
  while (true) {
    mpq_class pad(2);
    mpq_div_2exp(pad.get_mpq_t(), pad.get_mpq_t(), static_cast<mp_bitcnt_t>(grid));
    if (pad <= budget) break;
    ++grid;
  }
  return {Dyadic::floor_of(lo, grid), Dyadic::ceil_of(hi, grid)};
}

}  // namespace

CertifiedReal CertifiedReal::rational(mpq_class value) {
  value.canonicalize();
  return CertifiedReal(Rational{std::move(value)});
}

CertifiedReal CertifiedReal::rational(long num, long den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  mpq_class q(num, den);
  return rational(q);
}

CertifiedReal CertifiedReal::algebraic(IntPoly poly, mpq_class lo, mpq_class hi) {
  lo.canonicalize();
  hi.canonicalize();
  IntPoly f = primitive_part(poly);
  if (degree(f) < 1) throw InvalidArgument("algebraic number needs a polynomial of degree >= 1");
  if (hi < lo) throw InvalidArgument("isolating interval has lo > hi");
  int roots = count_real_roots(f, lo, hi);
  if (roots != 1) {
    throw InvalidArgument("polynomial " + to_string(f) + " has " + std::to_string(roots) +
                          " real roots in [" + lo.get_str() + ", " + hi.get_str() + "]");
  }
  if (sign_at(f, lo) == 0) return rational(lo);
  if (sign_at(f, hi) == 0) return rational(hi);
  return CertifiedReal(Algebraic{std::move(f), std::move(lo), std::move(hi)});
}

CertifiedReal CertifiedReal::decimal(std::string_view digits, std::optional<int> error_digits) {
  std::string s(digits);
  auto dot = s.find('.');
  int frac = dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
  mpq_class center = parse_rational(s);
  int n = error_digits.value_or(frac);
  if (n < 0) throw InvalidArgument("negative error digits");
  return CertifiedReal(Decimal{std::move(s), std::move(center), n});
}

int CertifiedReal::max_bits() const {
  if (kind() == Kind::decimal) return decimal_max_bits(as_decimal().error_digits);
  return INT_MAX;
}

std::string CertifiedReal::describe() const {
  switch (kind()) {
    case Kind::rational:
      return "rational " + rational_string(as_rational().value);
    case Kind::algebraic: {
      const auto& a = as_algebraic();
      return "algebraic coeffs=" + to_string(a.poly) + " lo=" + rational_string(a.lo) +
             " hi=" + rational_string(a.hi);
    }
    case Kind::decimal: {
      const auto& d = as_decimal();
      auto dot = d.digits.find('.');
      int frac = dot == std::string::npos ? 0 : static_cast<int>(d.digits.size() - dot - 1);
      std::string out = "decimal " + d.digits;
      if (frac != d.error_digits) out += " err=" + std::to_string(d.error_digits);
      return out;
    }
  }
  return {};
}

CertifiedReal CertifiedReal::parse(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string kind;
  is >> kind;
  std::vector<std::string> tokens;
  for (std::string t; is >> t;) tokens.push_back(t);
  auto value_of = [&](std::string_view key) -> std::optional<std::string> {
    for (const auto& t : tokens) {
      if (t.size() > key.size() && t.compare(0, key.size(), key) == 0 && t[key.size()] == '=') {
        return t.substr(key.size() + 1);
      }
    }
    return std::nullopt;
  };
  if (kind == "rational") {
    if (tokens.size() != 1) throw InvalidArgument("rational expects one value");
    return rational(parse_rational(tokens[0]));
  }
  if (kind == "decimal") {
    if (tokens.empty()) throw InvalidArgument("decimal expects digits");
    std::optional<int> err;
    if (auto e = value_of("err")) {
      try {
        err = std::stoi(*e);
      } catch (const std::exception&) {
        throw InvalidArgument("malformed err= value");
      }
    }
    if (tokens[0].find_first_not_of("+-.0123456789") != std::string::npos) {
      throw InvalidArgument("malformed decimal digits: " + tokens[0]);
    }
    return decimal(tokens[0], err);
  }
  if (kind == "algebraic") {
    auto coeffs = value_of("coeffs");
    auto lo = value_of("lo");
    auto hi = value_of("hi");
    if (!coeffs || !lo || !hi) throw InvalidArgument("algebraic expects coeffs=, lo=, hi=");
    IntPoly f;
    std::stringstream cs(*coeffs);
    for (std::string c; std::getline(cs, c, ',');) {
      if (c.empty() || c.find_first_not_of("+-0123456789") != std::string::npos) {
        throw InvalidArgument("malformed coefficient: " + c);
      }
      if (c.front() == '+') c.erase(0, 1);
      f.emplace_back(c, 10);
    }
    return algebraic(std::move(f), parse_rational(*lo), parse_rational(*hi));
  }
  throw InvalidArgument("unknown number kind '" + kind + "'");
}

DyadicInterval refine(const CertifiedReal& x, int bits) {
  if (bits < 1) throw InvalidArgument("refine: precision must be >= 1 bit");
  switch (x.kind()) {
    case CertifiedReal::Kind::rational:
      return refine_rational(x.as_rational().value, bits);
    case CertifiedReal::Kind::algebraic:
      return refine_algebraic(x.as_algebraic(), bits);
    case CertifiedReal::Kind::decimal:
      return refine_decimal(x.as_decimal(), bits);
  }
  throw InvalidArgument("unknown kind");
}

std::optional<NearestInt> nearest_int_dist(const DyadicInterval& v) {
  long scale = std::max<long>(1, -std::min(v.lower().exponent(), v.upper().exponent()));
  mpz_class lo = v.lower().floor_scaled(scale);  // exact at this scale
  mpz_class hi = v.upper().floor_scaled(scale);
  mpz_class half;
  mpz_ui_pow_ui(half.get_mpz_t(), 2, static_cast<unsigned long>(scale - 1));
  mpz_class k_lo;
  mpz_class k_hi;
  mpz_fdiv_q_2exp(k_lo.get_mpz_t(), mpz_class(lo + half).get_mpz_t(),
                  static_cast<mp_bitcnt_t>(scale));
  mpz_fdiv_q_2exp(k_hi.get_mpz_t(), mpz_class(hi + half).get_mpz_t(),
                  static_cast<mp_bitcnt_t>(scale));
  if (k_lo != k_hi) return std::nullopt;
  mpz_class k_scaled;
  mpz_mul_2exp(k_scaled.get_mpz_t(), k_lo.get_mpz_t(), static_cast<mp_bitcnt_t>(scale));
  DyadicInterval r = DyadicInterval::from_scaled(lo - k_scaled, hi - k_scaled, scale);
  return NearestInt{-k_lo, r.abs()};
}

std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::less:
      return "less";
    case Ordering::greater:
      return "greater";
    case Ordering::equal:
      return "equal";
    case Ordering::undecided:
      return "undecided";
  }
  return "?";
}

namespace {

Ordering decide(const DyadicInterval& a, const DyadicInterval& b) {
  if (a.certainly_less(b)) return Ordering::less;
  if (b.certainly_less(a)) return Ordering::greater;
  if (a.is_exact() && b.is_exact() && a == b) return Ordering::equal;
  return Ordering::undecided;
}

}  // namespace

Ordering certified_compare(DyadicInterval a, DyadicInterval b, const Refiner& refine_a,
                           const Refiner& refine_b, int cap_bits, int start_bits) {
  Ordering r = decide(a, b);
  if (r != Ordering::undecided) return r;
  bool a_done = a.is_exact() || !refine_a;
  bool b_done = b.is_exact() || !refine_b;
  for (int bits = std::max(1, start_bits); bits <= cap_bits;) {
    if (!a_done) {
      try {
        a = refine_a(bits);
      } catch (const PrecisionExhausted&) {
        a_done = true;
      }
    }
    if (!b_done) {
      try {
        b = refine_b(bits);
      } catch (const PrecisionExhausted&) {
        b_done = true;
      }
    }
    r = decide(a, b);
    if (r != Ordering::undecided) return r;
    if ((a_done && b_done) || bits == cap_bits) break;
    bits = bits > cap_bits / 2 ? cap_bits : bits * 2;
  }
  return Ordering::undecided;
}

namespace {

int exact_degree(const CertifiedReal& x) {
  switch (x.kind()) {
    case CertifiedReal::Kind::rational:
      return 1;
    case CertifiedReal::Kind::algebraic:
      return degree(x.as_algebraic().poly);
    case CertifiedReal::Kind::decimal:
      return 0;
  }
  return 0;
}

// Exact equality for rational/algebraic values.
bool exactly_equal(const CertifiedReal& a, const CertifiedReal& b) {
  using K = CertifiedReal::Kind;
  if (a.kind() == K::rational && b.kind() == K::rational) {
    return a.as_rational().value == b.as_rational().value;
  }
  if (a.kind() == K::rational || b.kind() == K::rational) {
    const auto& r = a.kind() == K::rational ? a.as_rational().value : b.as_rational().value;
    const auto& alg = a.kind() == K::rational ? b.as_algebraic() : a.as_algebraic();
    return alg.lo <= r && r <= alg.hi && sign_at(alg.poly, r) == 0;
  }
  const auto& x = a.as_algebraic();
  const auto& y = b.as_algebraic();
  IntPoly g = gcd(x.poly, y.poly);
  if (degree(g) < 1) return false;
  mpq_class lo = std::max(x.lo, y.lo);
  mpq_class hi = std::min(x.hi, y.hi);
  if (hi < lo) return false;
  return count_real_roots(g, lo, hi) >= 1;
}

}  // namespace

Ordering compare(const CertifiedReal& a, const CertifiedReal& b, int cap_bits) {
  using K = CertifiedReal::Kind;
  if (a.kind() == K::rational && b.kind() == K::rational) {
    int c = cmp(a.as_rational().value, b.as_rational().value);
    return c < 0 ? Ordering::less : (c > 0 ? Ordering::greater : Ordering::equal);
  }
  const bool exact_test = exact_degree(a) > 0 && exact_degree(b) > 0;
  const int stall_rounds = 4 * exact_degree(a) * exact_degree(b);
  bool known_distinct = false;

  int bits = std::min(64, cap_bits);
  auto safe_refine = [](const CertifiedReal& x, int p, std::optional<DyadicInterval>& last) {
    int q = std::min(p, x.max_bits());
    if (q < 1) return;
    try {
      last = refine(x, q);
    } catch (const PrecisionExhausted&) {
    }
  };
  std::optional<DyadicInterval> ia;
  std::optional<DyadicInterval> ib;
  for (int round = 0;; ++round) {
    safe_refine(a, bits, ia);
    safe_refine(b, bits, ib);
    if (!ia || !ib) return Ordering::undecided;
    Ordering r = decide(*ia, *ib);
    if (r != Ordering::undecided) return r;
    const bool at_cap = bits >= cap_bits;
    if (exact_test && !known_distinct && (round + 1 >= stall_rounds || at_cap)) {
      if (exactly_equal(a, b)) return Ordering::equal;
      known_distinct = true;
    }
    if (at_cap) return Ordering::undecided;
    bits = bits > cap_bits / 2 ? cap_bits : bits * 2;
  }
}

}  // namespace dioph
