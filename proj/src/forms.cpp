#include "dioph/forms.hpp"

#include <algorithm>
#include <climits>
#include <cstdio>

#include "dioph/errors.hpp"

namespace dioph {

std::string to_string(CaseTag c) {
  switch (c) {
    case CaseTag::m1n3:
      return "m1n3";
    case CaseTag::m3n1:
      return "m3n1";
    case CaseTag::m2n2:
      return "m2n2";
    case CaseTag::other:
      return "other";
  }
  return "other";
}

CaseTag case_from_string(std::string_view s) {
  if (s == "m1n3") return CaseTag::m1n3;
  if (s == "m3n1") return CaseTag::m3n1;
  if (s == "m2n2") return CaseTag::m2n2;
  if (s == "other") return CaseTag::other;
  throw InvalidArgument("unknown case '" + std::string(s) + "' (expected m1n3, m3n1 or m2n2)");
}

CaseTag case_of(int m, int n) {
  if (m == 1 && n == 3) return CaseTag::m1n3;
  if (m == 3 && n == 1) return CaseTag::m3n1;
  if (m == 2 && n == 2) return CaseTag::m2n2;
  return CaseTag::other;
}

ThetaMatrix::ThetaMatrix(int m, int n, std::vector<CertifiedReal> entries)
    : m_(m), n_(n), entries_(std::move(entries)) {
  if (m < 1 || n < 1) throw InvalidArgument("theta needs m >= 1 and n >= 1");
  if (entries_.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(n)) {
    throw InvalidArgument("theta has " + std::to_string(entries_.size()) + " entries, expected " +
                          std::to_string(m * n));
  }
}

int ThetaMatrix::max_bits() const {
  int bits = INT_MAX;
  for (const auto& e : entries_) bits = std::min(bits, e.max_bits());
  return bits;
}

bool ThetaMatrix::precision_limited() const {
  return std::any_of(entries_.begin(), entries_.end(), [](const CertifiedReal& e) {
    return e.kind() == CertifiedReal::Kind::decimal;
  });
}

bool ThetaMatrix::row_exact(int j) const {
  for (int i = 0; i < m_; ++i) {
    if (!entry(j, i).is_exact_rational()) return false;
  }
  return true;
}

std::string ThetaMatrix::config_hash() const {
  // FNV-1a, 64 bit
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  feed("m=" + std::to_string(m_) + ";n=" + std::to_string(n_) + ";");
  for (const auto& e : entries_) feed(e.describe() + ";");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::int64_t height(std::span<const std::int64_t> x) {
  std::int64_t h = 0;
  for (auto v : x) h = std::max(h, v < 0 ? -v : v);
  return h;
}

namespace {

// Distance of v to the nearest integer (round half up) and that integer.
mpq_class exact_dist(const mpq_class& v, mpz_class& k) {
  mpq_class shifted = v + mpq_class(1, 2);
  mpz_fdiv_q(k.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  mpq_class r = v - mpq_class(k);
  if (sgn(r) < 0) r = -r;
  return r;
}

mpq_class exact_form(const ThetaMatrix& theta, int j, std::span<const std::int64_t> x) {
  mpq_class v = 0;
  for (int i = 0; i < theta.m(); ++i) {
    v += theta.entry(j, i).as_rational().value * mpz_class(static_cast<long>(x[static_cast<std::size_t>(i)]));
  }
  return v;
}

}  // namespace

FormEvaluator::FormEvaluator(const ThetaMatrix& theta, int bits)
    : m_(theta.m()), n_(theta.n()), bits_(bits) {
  if (bits < 1) throw InvalidArgument("precision must be >= 1 bit");
  if (bits > theta.max_bits()) {
    throw PrecisionExhausted("theta supports at most " + std::to_string(theta.max_bits()) +
                             " bits, asked for " + std::to_string(bits));
  }
  const auto count = static_cast<std::size_t>(m_ * n_);
  std::vector<DyadicInterval> refined(count);
  exact_rows_.resize(static_cast<std::size_t>(n_));
  long scale = bits + 2;
  for (int j = 0; j < n_; ++j) {
    if (theta.row_exact(j)) {
      std::vector<mpq_class> row;
      for (int i = 0; i < m_; ++i) row.push_back(theta.entry(j, i).as_rational().value);
      exact_rows_[static_cast<std::size_t>(j)] = std::move(row);
    }
    for (int i = 0; i < m_; ++i) {
      const auto& e = theta.entry(j, i);
      auto& r = refined[static_cast<std::size_t>(j * m_ + i)];
      r = refine(e, std::min(bits + 2, e.max_bits()));
      scale = std::max({scale, -r.lower().exponent(), -r.upper().exponent()});
    }
  }
  scale_ = scale;
  lo_.reserve(count);
  hi_.reserve(count);
  for (const auto& r : refined) {
    lo_.push_back(r.lower().floor_scaled(scale_));
    hi_.push_back(r.upper().ceil_scaled(scale_));
  }
  mpz_ui_pow_ui(one_.get_mpz_t(), 2, static_cast<unsigned long>(scale_));
  mpz_ui_pow_ui(half_.get_mpz_t(), 2, static_cast<unsigned long>(scale_ - 1));
  three_halves_ = one_ + half_;
}

void FormEvaluator::form_fixed(int j, std::span<const std::int64_t> x, Workspace& ws) const {
  mpz_set_ui(ws.lo.get_mpz_t(), 0);
  mpz_set_ui(ws.hi.get_mpz_t(), 0);
  for (int i = 0; i < m_; ++i) {
    const std::int64_t v = x[static_cast<std::size_t>(i)];
    if (v == 0) continue;
    const auto idx = static_cast<std::size_t>(j * m_ + i);
    if (v > 0) {
      auto u = static_cast<unsigned long>(v);
      mpz_addmul_ui(ws.lo.get_mpz_t(), lo_[idx].get_mpz_t(), u);
      mpz_addmul_ui(ws.hi.get_mpz_t(), hi_[idx].get_mpz_t(), u);
    } else {
      auto u = static_cast<unsigned long>(-v);
      mpz_submul_ui(ws.lo.get_mpz_t(), hi_[idx].get_mpz_t(), u);
      mpz_submul_ui(ws.hi.get_mpz_t(), lo_[idx].get_mpz_t(), u);
    }
  }
}

DyadicInterval FormEvaluator::form(int j, std::span<const std::int64_t> x) const {
  if (const auto& row = exact_rows_[static_cast<std::size_t>(j)]) {
    mpq_class v = 0;
    for (int i = 0; i < m_; ++i) v += (*row)[static_cast<std::size_t>(i)] * mpz_class(static_cast<long>(x[static_cast<std::size_t>(i)]));
    const mpz_class& den = v.get_den();
    if (mpz_popcount(den.get_mpz_t()) == 1) {
      auto k = static_cast<long>(mpz_scan1(den.get_mpz_t(), 0));
      return DyadicInterval(Dyadic(v.get_num(), -k));
    }
    return {Dyadic::floor_of(v, scale_), Dyadic::ceil_of(v, scale_)};
  }
  Workspace ws;
  form_fixed(j, x, ws);
  return DyadicInterval::from_scaled(ws.lo, ws.hi, scale_);
}

namespace {

// Distance to the nearest integer of u * 2^-scale for 0 <= u < 2 * one.
void fixed_dist(mpz_t out, const mpz_t u, const mpz_class& one, const mpz_class& half) {
  if (mpz_cmp(u, one.get_mpz_t()) >= 0) {
    mpz_sub(out, u, one.get_mpz_t());
  } else {
    mpz_set(out, u);
  }
  if (mpz_cmp(out, half.get_mpz_t()) > 0) mpz_sub(out, one.get_mpz_t(), out);
}

}  // namespace

void FormEvaluator::zeta_fixed(std::span<const std::int64_t> x, Fixed& out, Workspace& ws) const {
  mpz_set_ui(out.lo.get_mpz_t(), 0);
  mpz_set_ui(out.hi.get_mpz_t(), 0);
  for (int j = 0; j < n_; ++j) {
    if (const auto& row = exact_rows_[static_cast<std::size_t>(j)]) {
      mpq_class v = 0;
      for (int i = 0; i < m_; ++i) v += (*row)[static_cast<std::size_t>(i)] * mpz_class(static_cast<long>(x[static_cast<std::size_t>(i)]));
      mpz_class k;
      mpq_class r = exact_dist(v, k);
      mpq_class scaled = r * one_;
      mpz_fdiv_q(ws.r_lo.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      mpz_cdiv_q(ws.r_hi.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    } else {
      form_fixed(j, x, ws);
      // ws.lo = r + k * one with 0 <= r < one; the form lies in [r, e] + k * one
      mpz_ptr width = ws.width.get_mpz_t();
      mpz_ptr r = ws.tmp.get_mpz_t();
      mpz_ptr e = ws.end.get_mpz_t();
      mpz_sub(width, ws.hi.get_mpz_t(), ws.lo.get_mpz_t());
      mpz_fdiv_r_2exp(r, ws.lo.get_mpz_t(), static_cast<mp_bitcnt_t>(scale_));
      mpz_add(e, r, width);
      if (mpz_cmp(width, half_.get_mpz_t()) >= 0) {
        mpz_set_ui(ws.r_lo.get_mpz_t(), 0);
        mpz_set(ws.r_hi.get_mpz_t(), half_.get_mpz_t());
      } else {
        const bool has_integer = mpz_sgn(r) == 0 || mpz_cmp(e, one_.get_mpz_t()) >= 0;
        const bool has_half =
            (mpz_cmp(r, half_.get_mpz_t()) <= 0 && mpz_cmp(half_.get_mpz_t(), e) <= 0) ||
            mpz_cmp(e, three_halves_.get_mpz_t()) >= 0;
        mpz_ptr da = ws.da.get_mpz_t();
        mpz_ptr de = ws.de.get_mpz_t();
        fixed_dist(da, r, one_, half_);
        fixed_dist(de, e, one_, half_);
        const bool a_smaller = mpz_cmp(da, de) < 0;
        if (has_integer) {
          mpz_set_ui(ws.r_lo.get_mpz_t(), 0);
        } else {
          mpz_set(ws.r_lo.get_mpz_t(), a_smaller ? da : de);
        }
        mpz_set(ws.r_hi.get_mpz_t(), has_half ? half_.get_mpz_t() : (a_smaller ? de : da));
      }
    }
    if (mpz_cmp(ws.r_lo.get_mpz_t(), out.lo.get_mpz_t()) > 0) mpz_set(out.lo.get_mpz_t(), ws.r_lo.get_mpz_t());
    if (mpz_cmp(ws.r_hi.get_mpz_t(), out.hi.get_mpz_t()) > 0) mpz_set(out.hi.get_mpz_t(), ws.r_hi.get_mpz_t());
  }
}

DyadicInterval FormEvaluator::zeta(std::span<const std::int64_t> x) const {
  Workspace ws;
  Fixed f;
  zeta_fixed(x, f, ws);
  return DyadicInterval::from_scaled(f.lo, f.hi, scale_);
}

std::vector<DyadicInterval> eval_forms(const ThetaMatrix& theta, std::span<const std::int64_t> x,
                                       int bits) {
  if (x.size() != static_cast<std::size_t>(theta.m())) {
    throw InvalidArgument("x has " + std::to_string(x.size()) + " coordinates, expected " +
                          std::to_string(theta.m()));
  }
  FormEvaluator ev(theta, bits);
  std::vector<DyadicInterval> out;
  out.reserve(static_cast<std::size_t>(theta.n()));
  for (int j = 0; j < theta.n(); ++j) out.push_back(ev.form(j, x));
  return out;
}


std::optional<mpq_class> exact_zeta(const ThetaMatrix& theta, std::span<const std::int64_t> x) {
  mpq_class best = 0;
  for (int j = 0; j < theta.n(); ++j) {
    if (!theta.row_exact(j)) return std::nullopt;
    mpz_class k;
    mpq_class r = exact_dist(exact_form(theta, j, x), k);
    if (r > best) best = r;
  }
  return best;
}

std::optional<ErrorProfile> profile_at(const ThetaMatrix& theta, const FormEvaluator& ev,
                                       std::span<const std::int64_t> x) {
  ErrorProfile p;
  p.bits = ev.bits();
  bool all_exact = true;
  mpq_class exact_max = 0;
  for (int j = 0; j < theta.n(); ++j) {
    DyadicInterval dist;
    if (theta.row_exact(j)) {
      mpz_class k;
      mpq_class r = exact_dist(exact_form(theta, j, x), k);
      if (sgn(r) == 0 && !p.exact_hit_form) p.exact_hit_form = j;
      if (r > exact_max) exact_max = r;
      p.offsets.push_back(-k.get_si());
      dist = DyadicInterval(Dyadic::floor_of(r, ev.scale()), Dyadic::ceil_of(r, ev.scale()));
    } else {
      all_exact = false;
      auto near = nearest_int_dist(ev.form(j, x));
      if (!near) return std::nullopt;
      p.offsets.push_back(near->offset.get_si());
      dist = near->dist;
    }
    p.zeta = j == 0 ? dist : max(p.zeta, dist);
  }
  if (all_exact) p.exact = exact_max;
  return p;
}

ErrorProfile zeta(const ThetaMatrix& theta, std::span<const std::int64_t> x,
                  const PrecisionPolicy& policy) {
  if (x.size() != static_cast<std::size_t>(theta.m())) {
    throw InvalidArgument("x has " + std::to_string(x.size()) + " coordinates, expected " +
                          std::to_string(theta.m()));
  }
  if (height(x) == 0) throw InvalidArgument("zeta is undefined at x = 0");
  const int cap = std::min(policy.cap_bits, theta.max_bits());
  if (policy.start_bits > cap) {
    throw PrecisionExhausted("starting precision " + std::to_string(policy.start_bits) +
                             " exceeds the usable cap " + std::to_string(cap));
  }
  for (int bits = policy.start_bits;;) {
    if (auto p = profile_at(theta, FormEvaluator(theta, bits), x)) return *p;
    if (bits >= cap) {
      throw PrecisionExhausted("nearest integer of a linear form is undetermined at " +
                                   std::to_string(bits) + " bits",
                               height(x));
    }
    bits = bits > cap / 2 ? cap : bits * 2;
  }
}

}  // namespace dioph
