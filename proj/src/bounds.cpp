#include "dioph/bounds.hpp"

#include <cmath>
#include <sstream>

#include "dioph/errors.hpp"
#include "json.hpp"

namespace dioph {

namespace {

std::string show(real_t v) {
  std::ostringstream os;
  os.precision(10);
  os << static_cast<double>(v);
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

real_t g1_poly(real_t a, real_t x) { return (2 * a * a - 2 * a + 1) * x * x + a * (a - 1) * x - a; }

real_t g2_poly(real_t a, real_t x) { return a * x * x + (a - 2) * x - (a - 1) * (a - 1); }

real_t g3_poly(real_t a, real_t x) { return a * x * x + (a - 1) * x - (2 * a * a - 2 * a + 1); }

real_t eval_g1(real_t a) {
  require(a > 0, "g1 needs alpha > 0, got " + show(a));
  const real_t q = 2 * a * a - 2 * a + 1;
  const real_t p = a * (1 - a);
  return (p + std::sqrt(p * p + 4 * a * q)) / (2 * q);
}

real_t eval_g2(real_t a) {
  require(a >= 3, "g2 needs alpha >= 3, got " + show(a));
  return std::sqrt(a + 1 / (a * a) - 7.0L / 4) + 1 / a - 0.5L;
}

real_t eval_h(real_t a) { return a - eval_g2(a) - 1; }

real_t eval_g3(real_t a) {
  require(a >= 1, "g3 needs alpha >= 1, got " + show(a));
  const real_t q = 2 * a * a - 2 * a + 1;
  return (1 - a + std::sqrt((1 - a) * (1 - a) + 4 * a * q)) / (2 * a);
}

real_t alpha0() {
  // f is increasing (f' = 3x^2 - 2x + 2 > 0) with f(0) = -1 < 0 < 1 = f(1).
  auto f = [](real_t x) { return ((x - 1) * x + 2) * x - 1; };
  real_t lo = 0;
  real_t hi = 1;
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    const real_t mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

SysSolution solve_sys(real_t a) {
  require(a >= 1.0L / 3 && a < 1, "the system is solved for 1/3 <= alpha < 1, got " + show(a));
  SysSolution s;
  s.delta = eval_g1(a);
  const real_t denom = 1 - a * s.delta;
  if (std::fabs(denom) < 1e-12L) {
    throw SingularSystem("1 - alpha * delta vanishes at alpha = " + show(a));
  }
  s.gamma = s.delta * (1 - a) / denom;
  s.near_singular = std::fabs(denom) < 1e-3L;
  return s;
}

bool in_domain(CaseTag c, real_t a) {
  switch (c) {
    case CaseTag::m1n3:
      return a >= 1.0L / 3 && a <= 1;
    case CaseTag::m3n1:
      return a >= 3;
    case CaseTag::m2n2:
      return a >= 1;
    case CaseTag::other:
      return false;
  }
  return false;
}

JarnikBound rhs_jarnik(CaseTag c, real_t a) {
  require(in_domain(c, a), "alpha = " + show(a) + " is outside the domain of case " + to_string(c));
  switch (c) {
    case CaseTag::m1n3:
      return {a < 1 ? a * a / (1 - a) : HUGE_VALL, true};
    case CaseTag::m2n2:
      return {a * (a - 1), true};
    case CaseTag::m3n1:
      // (5 m^2)^(m - 1) with m = 3
      return {std::pow(a, 1.5L) - 3 * a, a > 2025};
    case CaseTag::other:
      break;
  }
  throw DomainError("no bound for case other");
}

real_t g_case(CaseTag c, real_t a) {
  require(in_domain(c, a), "alpha = " + show(a) + " is outside the domain of case " + to_string(c));
  switch (c) {
    case CaseTag::m1n3:
      return eval_g1(a);
    case CaseTag::m3n1:
      return eval_g2(a);
    case CaseTag::m2n2:
      return eval_g3(a);
    case CaseTag::other:
      break;
  }
  throw DomainError("no bound for case other");
}

real_t rhs_new(CaseTag c, real_t a) { return a * g_case(c, a); }

std::string to_string(Winner w) {
  switch (w) {
    case Winner::new_bound:
      return "new";
    case Winner::jarnik:
      return "jarnik";
    case Winner::tie:
      return "tie";
    case Winner::only_new:
      return "new (jarnik not applicable)";
  }
  return "tie";
}

std::vector<BoundRow> compare_bounds(CaseTag c, const std::vector<real_t>& grid) {
  std::vector<BoundRow> rows;
  for (real_t a : grid) {
    BoundRow r;
    r.alpha = a;
    r.jarnik = rhs_jarnik(c, a);
    r.new_rhs = rhs_new(c, a);
    if (!r.jarnik.applicable) {
      r.winner = Winner::only_new;
    } else {
      const real_t diff = r.new_rhs - r.jarnik.value;
      r.winner = diff > kTieMargin ? Winner::new_bound
                                   : (diff < -kTieMargin ? Winner::jarnik : Winner::tie);
    }
    rows.push_back(r);
  }
  return rows;
}

real_t find_crossing(CaseTag c, real_t lo, real_t hi) {
  auto diff = [c](real_t a) { return rhs_new(c, a) - rhs_jarnik(c, a).value; };
  const bool lo_neg = diff(lo) < 0;
  if (lo_neg == (diff(hi) < 0)) {
    throw DomainError("no sign change of the bound difference on [" + show(lo) + ", " + show(hi) + "]");
  }
  for (int i = 0; i < 200; ++i) {
    const real_t mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    ((diff(mid) < 0) == lo_neg ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

std::vector<real_t> linear_grid(real_t lo, real_t hi, int n) {
  std::vector<real_t> out;
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

std::string bounds_table_json(CaseTag c, const std::vector<BoundRow>& rows, bool pretty) {
  using nlohmann::json;
  json table = json::array();
  for (const auto& r : rows) {
    table.push_back({{"alpha", static_cast<double>(r.alpha)},
                     {"jarnik", static_cast<double>(r.jarnik.value)},
                     {"jarnik_applicable", r.jarnik.applicable},
                     {"new", static_cast<double>(r.new_rhs)},
                     {"winner", to_string(r.winner)}});
  }
  json doc = {{"case", to_string(c)}, {"rows", table}};
  return doc.dump(pretty ? 2 : -1) + "\n";
}

std::string bounds_table_csv(const std::vector<BoundRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "alpha,jarnik,jarnik_applicable,new,winner\n";
  for (const auto& r : rows) {
    os << static_cast<double>(r.alpha) << ',' << static_cast<double>(r.jarnik.value) << ','
       << (r.jarnik.applicable ? 1 : 0) << ',' << static_cast<double>(r.new_rhs) << ','
       << to_string(r.winner) << '\n';
  }
  return os.str();
}

}  // namespace dioph
