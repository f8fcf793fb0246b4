#include "dioph/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

void trim(RatPoly& f) {
  while (!f.empty() && sgn(f.back()) == 0) f.pop_back();
}

void trim(IntPoly& f) {
  while (!f.empty() && sgn(f.back()) == 0) f.pop_back();
}

RatPoly to_rat(const IntPoly& f) {
  RatPoly r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  return r;
}

// Remainder of a divided by b over Q; b must be nonzero.
RatPoly remainder(RatPoly a, const RatPoly& b) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() >= b.size()) {
    mpq_class factor = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= factor * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

int sign_at_rat(const RatPoly& f, const mpq_class& r) {
  mpq_class acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * r + *it;
  return sgn(acc);
}

int variations(const std::vector<RatPoly>& seq, const mpq_class& r) {
  int count = 0;
  int last = 0;
  for (const auto& p : seq) {
    int s = sign_at_rat(p, r);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

std::vector<mpz_class> divisors(const mpz_class& v) {
  std::vector<mpz_class> out;
  mpz_class a = ::abs(v);
  if (!a.fits_ulong_p() || a > 1000000000000UL) return out;
  unsigned long n = a.get_ui();
  for (unsigned long d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.emplace_back(d);
      if (d != n / d) out.emplace_back(n / d);
    }
  }
  return out;
}

using ModPoly = std::vector<unsigned>;

// True when g (monic, over F_p) divides f.
bool divides_mod(ModPoly f, const ModPoly& g, unsigned p) {
  const std::size_t dg = g.size() - 1;
  while (f.size() > dg) {
    unsigned lead = f.back();
    if (lead != 0) {
      std::size_t shift = f.size() - g.size();
      for (std::size_t i = 0; i <= dg; ++i) {
        unsigned long sub = static_cast<unsigned long>(lead) * g[i] % p;
        f[shift + i] = static_cast<unsigned>((f[shift + i] + p - sub) % p);
      }
    }
    f.pop_back();
  }
  return std::all_of(f.begin(), f.end(), [](unsigned c) { return c == 0; });
}

bool irreducible_mod(const IntPoly& f, unsigned p) {
  const int d = degree(f);
  ModPoly fm(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), f[i].get_mpz_t(), p);
    fm[i] = static_cast<unsigned>(r.get_ui());
  }
  if (fm.back() == 0) return false;
  for (int k = 1; k <= d / 2; ++k) {
    // Enumerate monic g of degree k by counting in base p.
    ModPoly g(static_cast<std::size_t>(k) + 1, 0);
    g[static_cast<std::size_t>(k)] = 1;
    while (true) {
      if (divides_mod(fm, g, p)) return false;
      std::size_t i = 0;
      while (i < static_cast<std::size_t>(k) && ++g[i] == p) g[i++] = 0;
      if (i == static_cast<std::size_t>(k)) break;
    }
  }
  return true;
}

}  // namespace

int degree(const IntPoly& f) {
  for (std::size_t i = f.size(); i > 0; --i) {
    if (sgn(f[i - 1]) != 0) return static_cast<int>(i - 1);
  }
  return -1;
}

IntPoly make_poly(std::initializer_list<long> coeffs) {
  IntPoly f;
  for (long c : coeffs) f.emplace_back(c);
  return f;
}

std::string to_string(const IntPoly& f) {
  std::ostringstream os;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i > 0) os << ',';
    os << f[i].get_str();
  }
  return os.str();
}

int sign_at(const IntPoly& f, const mpq_class& r) {
  // sign of sum c_i n^i d^(deg-i), d > 0
  const mpz_class& n = r.get_num();
  const mpz_class& d = r.get_den();
  const int deg = degree(f);
  if (deg < 0) return 0;
  mpz_class acc = f[static_cast<std::size_t>(deg)];
  mpz_class dpow = 1;
  for (int i = deg - 1; i >= 0; --i) {
    dpow *= d;
    acc = acc * n + f[static_cast<std::size_t>(i)] * dpow;
  }
  return sgn(acc);
}

int sign_at(const IntPoly& f, const Dyadic& r) {
  // r = m 2^e; for e < 0 evaluate the homogenized form with d = 2^-e
  const int deg = degree(f);
  if (deg < 0) return 0;
  if (r.exponent() >= 0) {
    mpz_class x;
    mpz_mul_2exp(x.get_mpz_t(), r.mantissa().get_mpz_t(), static_cast<mp_bitcnt_t>(r.exponent()));
    mpz_class acc = 0;
    for (int i = deg; i >= 0; --i) acc = acc * x + f[static_cast<std::size_t>(i)];
    return sgn(acc);
  }
  const auto k = static_cast<mp_bitcnt_t>(-r.exponent());
  mpz_class acc = f[static_cast<std::size_t>(deg)];
  mpz_class term;
  for (int i = deg - 1; i >= 0; --i) {
    acc *= r.mantissa();
    mpz_mul_2exp(term.get_mpz_t(), f[static_cast<std::size_t>(i)].get_mpz_t(),
                 k * static_cast<mp_bitcnt_t>(deg - i));
    acc += term;
  }
  return sgn(acc);
}

IntPoly derivative(const IntPoly& f) {
  IntPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<unsigned long>(i));
  trim(d);
  return d;
}

IntPoly primitive_part(const RatPoly& f) {
  mpz_class lcm_den = 1;
  for (const auto& c : f) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());
  IntPoly g;
  for (const auto& c : f) {
    mpq_class scaled = c * lcm_den;
    g.push_back(scaled.get_num());
  }
  return primitive_part(g);
}

IntPoly primitive_part(const IntPoly& f) {
  IntPoly g = f;
  trim(g);
  if (g.empty()) return g;
  mpz_class content = 0;
  for (const auto& c : g) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
  if (sgn(g.back()) < 0) content = -content;
  for (auto& c : g) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
  return g;
}

IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  RatPoly x = to_rat(a);
  RatPoly y = to_rat(b);
  trim(x);
  trim(y);
  while (!y.empty()) {
    RatPoly r = remainder(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return primitive_part(x);
}

IntPoly squarefree_part(const IntPoly& f) {
  IntPoly g = gcd(f, derivative(f));
  if (degree(g) <= 0) return primitive_part(f);
  // exact division f / g over Q
  RatPoly q;
  RatPoly rem = to_rat(f);
  trim(rem);
  RatPoly gr = to_rat(g);
  q.assign(rem.size() - gr.size() + 1, 0);
  while (rem.size() >= gr.size()) {
    mpq_class factor = rem.back() / gr.back();
    std::size_t shift = rem.size() - gr.size();
    q[shift] = factor;
    for (std::size_t i = 0; i < gr.size(); ++i) rem[shift + i] -= factor * gr[i];
    rem.pop_back();
    trim(rem);
  }
  return primitive_part(q);
}

int count_real_roots(const IntPoly& f, const mpq_class& a, const mpq_class& b) {
  if (b < a) return 0;
  IntPoly g = squarefree_part(f);
  if (degree(g) <= 0) return 0;
  std::vector<RatPoly> seq;
  seq.push_back(to_rat(g));
  seq.push_back(to_rat(derivative(g)));
  while (true) {
    RatPoly r = remainder(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(std::move(r));
  }
  // (a, b] from variations, plus a itself
  int count = variations(seq, a) - variations(seq, b);
  if (sign_at(g, a) == 0) ++count;
  return count;
}

IntPoly charpoly_of_power(const IntPoly& f, int k) {
  const int d = degree(f);
  if (d < 1) throw InvalidArgument("charpoly_of_power: degree must be positive");
  if (k < 1) throw InvalidArgument("charpoly_of_power: exponent must be positive");
  const auto n = static_cast<std::size_t>(d);
  using Matrix = std::vector<std::vector<mpq_class>>;
  auto zero = [n] { return Matrix(n, std::vector<mpq_class>(n, 0)); };
  auto mul = [n, &zero](const Matrix& x, const Matrix& y) {
    Matrix r = zero();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (sgn(x[i][l]) == 0) continue;
        for (std::size_t j = 0; j < n; ++j) r[i][j] += x[i][l] * y[l][j];
      }
    return r;
  };
  // Companion matrix: column c is the image of xi^c under multiplication by xi.
  Matrix comp = zero();
  for (std::size_t c = 0; c + 1 < n; ++c) comp[c + 1][c] = 1;
  for (std::size_t r = 0; r < n; ++r) comp[r][n - 1] = -mpq_class(f[r]) / mpq_class(f[n]);
  Matrix a = comp;
  for (int i = 1; i < k; ++i) a = mul(a, comp);

  // Faddeev-LeVerrier
  RatPoly coeff(n + 1, 0);
  coeff[n] = 1;
  Matrix m = zero();
  for (std::size_t step = 1; step <= n; ++step) {
    Matrix am = mul(a, m);
    for (std::size_t i = 0; i < n; ++i) am[i][i] += coeff[n - step + 1];
    m = std::move(am);
    Matrix prod = mul(a, m);
    mpq_class trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += prod[i][i];
    coeff[n - step] = -trace / static_cast<long>(step);
  }
  return primitive_part(coeff);
}

IrreducibilityScreen screen_irreducible(const IntPoly& f) {
  IrreducibilityScreen out;
  const int d = degree(f);
  if (d < 1) return out;
  if (sgn(f[0]) == 0) {
    out.has_rational_root = true;
    return out;
  }
  for (const auto& p : divisors(f[0])) {
    for (const auto& q : divisors(f[static_cast<std::size_t>(d)])) {
      mpq_class r(p, q);
      r.canonicalize();
      if (sign_at(f, r) == 0 || sign_at(f, mpq_class(-r)) == 0) {
        out.has_rational_root = true;
        return out;
      }
    }
  }
  mpz_class content = 0;
  for (const auto& c : f) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
  if (content != 1) return out;
  for (unsigned p : {2U, 3U, 5U, 7U, 11U, 13U}) {
    if (mpz_divisible_ui_p(f[static_cast<std::size_t>(d)].get_mpz_t(), p)) continue;
    if (irreducible_mod(f, p)) {
      out.certifying_prime = p;
      break;
    }
  }
  return out;
}

}  // namespace dioph
