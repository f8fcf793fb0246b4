#include "dioph/bestapprox.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

using u64 = std::uint64_t;
constexpr u64 kHalf = u64{1} << 63;
constexpr u64 kNoPrune = std::numeric_limits<u64>::max();
// Keeps the 64-bit kernel's error term W = sum |x_i| w_i far below 2^63.
constexpr std::int64_t kMaxHeight = std::int64_t{1} << 40;

u64 dist64(u64 u) { return u <= kHalf ? u : u64{0} - u; }

// Theta reduced modulo 1 on the grid 2^-64: entry (j, i) lies in
// [lo, lo + w] * 2^-64 (mod 1) with w <= 2. zeta(x) then costs m * n word
// multiplications with wrapping arithmetic.
class FastKernel {
 public:
  static std::optional<FastKernel> make(const ThetaMatrix& theta) {
    if (theta.max_bits() < 66) return std::nullopt;
    FastKernel k;
    k.m_ = theta.m();
    k.n_ = theta.n();
    for (const auto& e : theta.entries()) {
      DyadicInterval r = refine(e, 66);
      mpz_class a = r.lower().floor_scaled(64);
      mpz_class b = r.upper().ceil_scaled(64);
      mpz_class w = b - a;
      mpz_class lo;
      mpz_fdiv_r_2exp(lo.get_mpz_t(), a.get_mpz_t(), 64);
      k.lo_.push_back(static_cast<u64>(mpz_get_ui(lo.get_mpz_t())));
      k.w_.push_back(static_cast<u64>(mpz_get_ui(w.get_mpz_t())));
    }
    return k;
  }

  // Enclosure [zlo, zhi] * 2^-64 of zeta(x). Returns false as soon as some
  // form's lower bound reaches prune_at (then zeta(x) >= prune_at * 2^-64).
  bool zeta(const std::int64_t* x, u64 prune_at, u64& zlo, u64& zhi) const {
    zlo = 0;
    zhi = 0;
    const u64* lo = lo_.data();
    const u64* w = w_.data();
    for (int j = 0; j < n_; ++j, lo += m_, w += m_) {
      u64 c = 0;
      u64 neg = 0;
      u64 pos = 0;
      for (int i = 0; i < m_; ++i) {
        const std::int64_t v = x[i];
        c += static_cast<u64>(v) * lo[i];
        if (v < 0) {
          neg += static_cast<u64>(-v) * w[i];
        } else {
          pos += static_cast<u64>(v) * w[i];
        }
      }
      const u64 a = c - neg;
      const u64 e = a + (pos + neg);
      const bool wrapped = e < a;
      const bool has_integer = a == 0 || wrapped;
      const bool has_half = !wrapped && a <= kHalf && kHalf <= e;
      const u64 da = dist64(a);
      const u64 de = dist64(e);
      const u64 dlo = has_integer ? 0 : std::min(da, de);
      const u64 dhi = has_half ? kHalf : std::max(da, de);
      if (dlo >= prune_at) return false;
      zlo = std::max(zlo, dlo);
      zhi = std::max(zhi, dhi);
    }
    return true;
  }

 private:
  int m_ = 0;
  int n_ = 0;
  std::vector<u64> lo_;
  std::vector<u64> w_;
};

// Evaluators at 128, 256, ... bits up to `top`, built on first use.
class Ladder {
 public:
  Ladder(const ThetaMatrix& theta, int top) : theta_(theta) {
    for (int b = 128; b < top; b *= 2) bits_.push_back(b);
    bits_.push_back(top);
    evals_.resize(bits_.size());
  }

  [[nodiscard]] std::size_t size() const { return bits_.size(); }

  const FormEvaluator& at(std::size_t k) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!evals_[k]) evals_[k] = std::make_unique<FormEvaluator>(theta_, bits_[k]);
    return *evals_[k];
  }

 private:
  const ThetaMatrix& theta_;
  std::vector<int> bits_;
  std::vector<std::unique_ptr<FormEvaluator>> evals_;
  std::mutex mutex_;
};

bool all_rows_exact(const ThetaMatrix& theta) {
  for (int j = 0; j < theta.n(); ++j) {
    if (!theta.row_exact(j)) return false;
  }
  return true;
}

// Calls visit(x) for every canonical x of height t whose first coordinate is
// x1, in lexicographic order. For m = 1 the only point is (t).
template <class Visit>
void for_each_in_row(int m, std::int64_t t, std::int64_t x1, IntVector& x, Visit&& visit) {
  x[0] = x1;
  if (m == 1) {
    visit(x);
    return;
  }
  auto rec = [&](auto&& self, int i, bool hit, bool lead_zero) -> void {
    const bool last = i == m - 1;
    const std::int64_t from = lead_zero ? 0 : -t;
    if (last && !hit) {
      if (!lead_zero) {
        x[static_cast<std::size_t>(i)] = -t;
        visit(x);
      }
      x[static_cast<std::size_t>(i)] = t;
      visit(x);
      return;
    }
    for (std::int64_t v = from; v <= t; ++v) {
      x[static_cast<std::size_t>(i)] = v;
      if (last) {
        if (lead_zero && v == 0) continue;
        visit(x);
      } else {
        self(self, i + 1, hit || v == t || v == -t, lead_zero && v == 0);
      }
    }
  };
  rec(rec, 1, x1 == t, x1 == 0);
}

// Ordering of zeta(a) against zeta(b), certified. Equal only when both are
// exactly known and identical.
Ordering compare_points(const ThetaMatrix& theta, bool exact_all, Ladder& ladder,
                        const IntVector& a, const IntVector& b) {
  if (exact_all) {
    mpq_class za = *exact_zeta(theta, a);
    mpq_class zb = *exact_zeta(theta, b);
    if (za < zb) return Ordering::less;
    if (zb < za) return Ordering::greater;
    return Ordering::equal;
  }
  FormEvaluator::Workspace ws;
  FormEvaluator::Fixed fa;
  FormEvaluator::Fixed fb;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const FormEvaluator& ev = ladder.at(k);
    ev.zeta_fixed(a, fa, ws);
    ev.zeta_fixed(b, fb, ws);
    if (fa.hi < fb.lo) return Ordering::less;
    if (fb.hi < fa.lo) return Ordering::greater;
    if (k + 1 == ladder.size() && fa.lo == fa.hi && fb.lo == fb.hi && fa.lo == fb.lo) {
      return Ordering::equal;
    }
  }
  throw PrecisionExhausted("zeta of two points of height " + std::to_string(height(a)) +
                               " and " + std::to_string(height(b)) +
                               " cannot be separated within the precision cap",
                           std::max(height(a), height(b)));
}

struct Candidate {
  IntVector x;
  u64 zlo = 0;
  u64 zhi = 0;
  bool valid = false;
};

class Engine {
 public:
  Engine(const ThetaMatrix& theta, const PrecisionPolicy& policy)
      : theta_(theta),
        top_(std::min(policy.cap_bits, theta.max_bits())),
        fast_(FastKernel::make(theta)),
        ladder_(theta, top_),
        exact_all_(all_rows_exact(theta)) {
    if (top_ < 1) throw PrecisionExhausted("theta supports no usable precision");
  }

  int top() const { return top_; }

  // Keeps in `best` the smaller of best and (x, zlo, zhi); ties keep best.
  void consider(Candidate& best, const IntVector& x, u64 zlo, u64 zhi, bool& tie) {
    if (!best.valid) {
      best = {x, zlo, zhi, true};
      return;
    }
    if (fast_) {
      if (zhi < best.zlo) {
        best = {x, zlo, zhi, true};
        return;
      }
      if (zlo > best.zhi) return;
    }
    switch (compare_points(theta_, exact_all_, ladder_, x, best.x)) {
      case Ordering::less:
        best = {x, zlo, zhi, true};
        break;
      case Ordering::equal:
        tie = true;
        break;
      default:
        break;
    }
  }

  void run_row(std::int64_t t, std::int64_t x1, u64 prune_at, Candidate& best, bool& tie) {
    IntVector x(static_cast<std::size_t>(theta_.m()));
    for_each_in_row(theta_.m(), t, x1, x, [&](const IntVector& p) {
      u64 zlo = 0;
      u64 zhi = 0;
      if (fast_) {
        u64 limit = prune_at;
        if (best.valid) limit = std::min(limit, best.zhi + 1);
        if (!fast_->zeta(p.data(), limit, zlo, zhi)) return;
      }
      consider(best, p, zlo, zhi, tie);
    });
  }

  Ordering against_record(const Candidate& c, const Candidate& rec) {
    if (fast_) {
      if (c.zhi < rec.zlo) return Ordering::less;
      if (c.zlo > rec.zhi) return Ordering::greater;
    }
    return compare_points(theta_, exact_all_, ladder_, c.x, rec.x);
  }

  Candidate fast_candidate(const IntVector& x) const {
    Candidate c{x, 0, 0, true};
    if (fast_) fast_->zeta(x.data(), kNoPrune, c.zlo, c.zhi);
    return c;
  }

  u64 prune_threshold(const Candidate& rec) const {
    if (!fast_ || !rec.valid) return kNoPrune;
    return rec.zhi;
  }

 private:
  const ThetaMatrix& theta_;
  int top_;
  std::optional<FastKernel> fast_;
  Ladder ladder_;
  bool exact_all_;
};

double shell_points(int m, std::int64_t t) {
  if (m == 1) return 1.0;
  const double a = static_cast<double>(2 * t + 1);
  const double b = static_cast<double>(2 * t - 1);
  double pa = 1.0;
  double pb = 1.0;
  for (int i = 0; i < m; ++i) {
    pa *= a;
    pb *= b;
  }
  return (pa - pb) / 2.0;
}

void check_inputs(const ThetaMatrix& theta, std::int64_t T) {
  if (T < 1) throw InvalidArgument("height bound T must be >= 1");
  if (T > kMaxHeight) throw InvalidArgument("height bound T is too large");
  (void)theta;
}

}  // namespace

bool is_canonical(const IntVector& x) {
  for (auto v : x) {
    if (v != 0) return v > 0;
  }
  return false;
}

ApproxSequence compute_sequence(const ThetaMatrix& theta, std::int64_t T,
                                const PrecisionPolicy& policy, int workers) {
  check_inputs(theta, T);
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  Engine engine(theta, policy);
  const FormEvaluator record_eval(theta, engine.top());

  ApproxSequence seq;
  seq.config_hash = theta.config_hash();
  seq.m = theta.m();
  seq.n = theta.n();
  seq.T = T;
  seq.precision_cap_bits = policy.cap_bits;
  seq.flags.precision_limited = theta.precision_limited();

  Candidate record;
  const int m = theta.m();
  struct Row {
    std::int64_t t;
    std::int64_t x1;
  };
  struct RowResult {
    Candidate best;
    bool tie = false;
    std::exception_ptr error;
  };

  for (std::int64_t t0 = 1; t0 <= T;) {
    // A batch of consecutive shells holding roughly 2^18 points.
    std::vector<Row> rows;
    std::int64_t t1 = t0;
    double budget = 0;
    for (;; ++t1) {
      if (m == 1) {
        rows.push_back({t1, t1});
      } else {
        for (std::int64_t x1 = 0; x1 <= t1; ++x1) rows.push_back({t1, x1});
      }
      budget += shell_points(m, t1);
      if (t1 == T || budget >= 262144.0) break;
    }

    const u64 prune_at = engine.prune_threshold(record);
    std::vector<RowResult> results(rows.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      for (std::size_t k = next++; k < rows.size(); k = next++) {
        try {
          engine.run_row(rows[k].t, rows[k].x1, prune_at, results[k].best, results[k].tie);
        } catch (...) {
          results[k].error = std::current_exception();
        }
      }
    };
    const auto nthreads = static_cast<std::size_t>(
        std::min<std::int64_t>(workers, static_cast<std::int64_t>(rows.size())));
    if (nthreads <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < nthreads; ++w) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    for (const auto& r : results) {
      if (r.error) std::rethrow_exception(r.error);
    }

    // Fold rows into shell minima, then shells into the running record.
    std::size_t k = 0;
    for (std::int64_t t = t0; t <= t1; ++t) {
      Candidate shell;
      bool tie = false;
      for (; k < rows.size() && rows[k].t == t; ++k) {
        const RowResult& r = results[k];
        tie = tie || r.tie;
        if (r.best.valid) engine.consider(shell, r.best.x, r.best.zlo, r.best.zhi, tie);
      }
      if (!shell.valid) continue;
      if (record.valid && engine.against_record(shell, record) != Ordering::less) continue;

      auto profile = profile_at(theta, record_eval, shell.x);
      if (!profile) {
        throw PrecisionExhausted("nearest integers of a best approximation are undetermined at " +
                                     std::to_string(engine.top()) + " bits",
                                 t);
      }
      if (tie) seq.flags.degenerate_tie = true;
      if (profile->exact_integer_hit()) seq.flags.exact_integer_hit = true;
      if (profile->exact && sgn(*profile->exact) == 0) {
        seq.flags.terminated_at = shell.x;
        return seq;
      }
      BestApproxRecord rec;
      rec.nu = static_cast<int>(seq.records.size()) + 1;
      rec.x = shell.x;
      rec.y = profile->offsets;
      rec.M = t;
      rec.zeta = profile->zeta;
      rec.bits = engine.top();
      seq.records.push_back(std::move(rec));
      record = engine.fast_candidate(shell.x);
    }
    t0 = t1 + 1;
  }
  return seq;
}

ApproxSequence oracle_sequence(const ThetaMatrix& theta, std::int64_t T, int bits) {
  check_inputs(theta, T);
  const FormEvaluator ev(theta, bits);
  const bool exact_all = all_rows_exact(theta);
  const int m = theta.m();

  struct Entry {
    IntVector x;
    FormEvaluator::Fixed z;
    mpq_class exact;
    bool valid = false;
    bool tie = false;
  };
  // -1, 0, 1 for less, equal, greater; throws when undecidable.
  auto cmp = [&](const Entry& a, const Entry& b) -> int {
    if (exact_all) return a.exact < b.exact ? -1 : (b.exact < a.exact ? 1 : 0);
    if (a.z.hi < b.z.lo) return -1;
    if (b.z.hi < a.z.lo) return 1;
    if (a.z.lo == a.z.hi && b.z.lo == b.z.hi && a.z.lo == b.z.lo) return 0;
    throw PrecisionExhausted("oracle cannot order two points at " + std::to_string(bits) + " bits",
                             std::max(height(a.x), height(b.x)));
  };

  ApproxSequence seq;
  seq.config_hash = theta.config_hash();
  seq.m = m;
  seq.n = theta.n();
  seq.T = T;
  seq.precision_cap_bits = bits;
  seq.flags.precision_limited = theta.precision_limited();

  // Minimum of every height over the canonical half of [-T, T]^m.
  std::vector<Entry> minimum(static_cast<std::size_t>(T) + 1);
  FormEvaluator::Workspace ws;
  Entry cur;
  cur.x.assign(static_cast<std::size_t>(m), -T);
  cur.x[0] = 0;
  while (true) {
    if (is_canonical(cur.x)) {
      ev.zeta_fixed(cur.x, cur.z, ws);
      if (exact_all) cur.exact = *exact_zeta(theta, cur.x);
      Entry& slot = minimum[static_cast<std::size_t>(height(cur.x))];
      if (!slot.valid) {
        slot = cur;
        slot.valid = true;
      } else {
        int c = cmp(cur, slot);
        if (c < 0) {
          slot = cur;
          slot.valid = true;
        } else if (c == 0) {
          slot.tie = true;
        }
      }
    }
    int i = m - 1;
    while (i >= 0 && cur.x[static_cast<std::size_t>(i)] == T) {
      cur.x[static_cast<std::size_t>(i)] = i == 0 ? 0 : -T;
      --i;
    }
    if (i < 0) break;
    ++cur.x[static_cast<std::size_t>(i)];
  }

  const Entry* best = nullptr;
  for (std::int64_t h = 1; h <= T; ++h) {
    const Entry& e = minimum[static_cast<std::size_t>(h)];
    if (!e.valid) continue;
    if (best != nullptr && cmp(e, *best) >= 0) continue;
    auto profile = profile_at(theta, ev, e.x);
    if (!profile) throw PrecisionExhausted("oracle offsets undetermined", h);
    if (e.tie) seq.flags.degenerate_tie = true;
    if (profile->exact_integer_hit()) seq.flags.exact_integer_hit = true;
    if (profile->exact && sgn(*profile->exact) == 0) {
      seq.flags.terminated_at = e.x;
      break;
    }
    BestApproxRecord rec;
    rec.nu = static_cast<int>(seq.records.size()) + 1;
    rec.x = e.x;
    rec.y = profile->offsets;
    rec.M = h;
    rec.zeta = profile->zeta;
    rec.bits = bits;
    seq.records.push_back(std::move(rec));
    best = &e;
  }
  return seq;
}

VerifyReport verify_sequence(const ThetaMatrix& theta, const ApproxSequence& seq) {
  VerifyReport report;
  auto fail = [&report](std::string why, std::optional<IntVector> x = std::nullopt) {
    report.ok = false;
    report.failure = std::move(why);
    report.counterexample = std::move(x);
    return report;
  };
  try {
    if (seq.m != theta.m() || seq.n != theta.n()) return fail("dimensions differ from theta");
    if (seq.T < 1 || seq.T > kMaxHeight) return fail("height bound out of range");
    const auto& recs = seq.records;
    std::int64_t scan_to = seq.T;
    if (seq.flags.terminated_at) {
      const IntVector& hit = *seq.flags.terminated_at;
      if (hit.size() != static_cast<std::size_t>(theta.m()) || !is_canonical(hit)) {
        return fail("terminating point is malformed");
      }
      auto z = exact_zeta(theta, hit);
      if (!z || sgn(*z) != 0) return fail("terminating point does not have zeta = 0", hit);
      scan_to = height(hit) - 1;
    }
    if (recs.empty()) {
      if (scan_to == 0) return report;
      return fail("sequence has no records");
    }
    if (recs.front().M != 1) return fail("first record is not at height 1", recs.front().x);

    std::vector<std::unique_ptr<FormEvaluator>> evals;
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const auto& r = recs[k];
      if (r.nu != static_cast<int>(k) + 1) return fail("record indices are not consecutive");
      if (r.x.size() != static_cast<std::size_t>(theta.m()) ||
          r.y.size() != static_cast<std::size_t>(theta.n())) {
        return fail("record " + std::to_string(r.nu) + " has wrong vector lengths");
      }
      if (!is_canonical(r.x)) return fail("record " + std::to_string(r.nu) + " is not canonical", r.x);
      if (r.M != height(r.x)) return fail("record " + std::to_string(r.nu) + " has M != height(x)", r.x);
      if (r.M > seq.T) return fail("record " + std::to_string(r.nu) + " exceeds T", r.x);
      if (k > 0) {
        if (r.M <= recs[k - 1].M) return fail("monotonicity: M not increasing at record " + std::to_string(r.nu), r.x);
        if (!r.zeta.certainly_less(recs[k - 1].zeta)) {
          return fail("monotonicity: zeta not certified decreasing at record " + std::to_string(r.nu), r.x);
        }
      }
      if (r.bits < 1) return fail("record " + std::to_string(r.nu) + " has no precision");
      FormEvaluator ev(theta, r.bits);
      auto p = profile_at(theta, ev, r.x);
      if (!p) return fail("offsets of record " + std::to_string(r.nu) + " are undetermined", r.x);
      if (p->offsets != r.y) return fail("offsets of record " + std::to_string(r.nu) + " differ", r.x);
      if (!p->zeta.intersects(r.zeta)) return fail("zeta of record " + std::to_string(r.nu) + " differs", r.x);
      if (p->exact && sgn(*p->exact) == 0) return fail("record has zeta = 0", r.x);
    }

    // Emptiness: every canonical x with M_nu <= M(x) <= min(M_{nu+1} - 1, T)
    // satisfies zeta(x) >= zeta_nu.
    const auto fast = FastKernel::make(theta);
    const bool exact_all = all_rows_exact(theta);
    const int m = theta.m();
    IntVector x(static_cast<std::size_t>(m));
    std::size_t nu = 0;
    const int top = recs.front().bits;
    Ladder ladder(theta, top);
    FormEvaluator::Workspace ws;
    for (std::int64_t t = 1; t <= scan_to; ++t) {
      while (nu + 1 < recs.size() && recs[nu + 1].M <= t) ++nu;
      const auto& r = recs[nu];
      mpz_class thr_z = r.zeta.upper().ceil_scaled(64);
      const u64 thr = thr_z.fits_ulong_p() ? mpz_get_ui(thr_z.get_mpz_t()) : kNoPrune;
      std::optional<IntVector> bad;
      std::string why;
      auto visit = [&](const IntVector& p) {
        if (bad) return;
        ++report.points_checked;
        if (p == r.x) return;
        u64 zlo = 0;
        u64 zhi = 0;
        if (fast && !fast->zeta(p.data(), thr, zlo, zhi)) return;
        for (std::size_t k = 0; k < ladder.size(); ++k) {
          DyadicInterval z = ladder.at(k).zeta(p);
          if (z.certainly_less(r.zeta)) {
            bad = p;
            why = "emptiness: zeta(x) < zeta_" + std::to_string(r.nu);
            return;
          }
          if (r.zeta.upper() <= z.lower()) return;
        }
        if (exact_all) {
          if (*exact_zeta(theta, p) < *exact_zeta(theta, r.x)) {
            bad = p;
            why = "emptiness: zeta(x) < zeta_" + std::to_string(r.nu);
          }
          return;
        }
        bad = p;
        why = "emptiness: zeta(x) cannot be compared with zeta_" + std::to_string(r.nu);
      };
      if (m == 1) {
        for_each_in_row(m, t, t, x, visit);
      } else {
        for (std::int64_t x1 = 0; x1 <= t && !bad; ++x1) for_each_in_row(m, t, x1, x, visit);
      }
      if (bad) return fail(why, bad);
    }
  } catch (const Error& e) {
    return fail(std::string("verification error: ") + e.what());
  }
  return report;
}

bool same_records(const ApproxSequence& a, const ApproxSequence& b, std::string* why) {
  auto differ = [why](std::string msg) {
    if (why != nullptr) *why = std::move(msg);
    return false;
  };
  if (a.m != b.m || a.n != b.n) return differ("dimensions differ");
  if (a.flags.terminated_at != b.flags.terminated_at) return differ("termination differs");
  const std::size_t n = std::min(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& ra = a.records[k];
    const auto& rb = b.records[k];
    const std::string at = "record " + std::to_string(k + 1) + ": ";
    if (ra.nu != rb.nu) return differ(at + "index differs");
    if (ra.x != rb.x) return differ(at + "x differs");
    if (ra.y != rb.y) return differ(at + "y differs");
    if (ra.M != rb.M) return differ(at + "M differs");
    if (!ra.zeta.intersects(rb.zeta)) return differ(at + "zeta intervals are disjoint");
  }
  if (a.records.size() != b.records.size()) {
    return differ("record counts differ: " + std::to_string(a.records.size()) + " vs " +
                  std::to_string(b.records.size()));
  }
  return true;
}

}  // namespace dioph
