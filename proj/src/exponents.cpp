#include "dioph/exponents.hpp"

#include <mpfr.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "dioph/errors.hpp"
#include "json.hpp"

namespace dioph {

namespace {

// RAII wrapper over an MPFR variable.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

void set_dyadic(mpfr_ptr out, const Dyadic& d, mpfr_rnd_t rnd) {
  mpfr_set_z_2exp(out, d.mantissa().get_mpz_t(), d.exponent(), rnd);
}

double log2_width(mpfr_ptr lo, mpfr_ptr hi, mpfr_prec_t prec) {
  Mpfr w(prec);
  mpfr_sub(w.get(), hi, lo, MPFR_RNDU);
  if (mpfr_zero_p(w.get())) return -std::numeric_limits<double>::infinity();
  mpfr_log2(w.get(), w.get(), MPFR_RNDU);
  return mpfr_get_d(w.get(), MPFR_RNDU);
}

}  // namespace

std::vector<LocalRatio> local_ratios(const ApproxSequence& seq) {
  std::vector<LocalRatio> out;
  const auto& recs = seq.records;
  for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
    const auto& r = recs[k];
    if (r.M < 2) continue;
    const auto prec = static_cast<mpfr_prec_t>(std::max(r.bits, 64) + 64);
    Mpfr zlo(prec), zhi(prec), nlo(prec), nhi(prec);
    Mpfr lm_lo(prec), lm_hi(prec), ln_lo(prec), ln_hi(prec);
    Mpfr a_lo(prec), a_hi(prec), b_lo(prec), b_hi(prec);

    // -log zeta in [-log zeta_hi, -log zeta_lo]
    set_dyadic(zlo.get(), r.zeta.lower(), MPFR_RNDD);
    set_dyadic(zhi.get(), r.zeta.upper(), MPFR_RNDU);
    mpfr_log(nlo.get(), zhi.get(), MPFR_RNDU);
    mpfr_neg(nlo.get(), nlo.get(), MPFR_RNDD);
    mpfr_log(nhi.get(), zlo.get(), MPFR_RNDD);  // -inf when zeta_lo = 0
    mpfr_neg(nhi.get(), nhi.get(), MPFR_RNDU);

    mpfr_set_si(lm_lo.get(), r.M, MPFR_RNDD);
    mpfr_log(lm_lo.get(), lm_lo.get(), MPFR_RNDD);
    mpfr_set_si(lm_hi.get(), r.M, MPFR_RNDU);
    mpfr_log(lm_hi.get(), lm_hi.get(), MPFR_RNDU);
    const std::int64_t next = recs[k + 1].M;
    mpfr_set_si(ln_lo.get(), next, MPFR_RNDD);
    mpfr_log(ln_lo.get(), ln_lo.get(), MPFR_RNDD);
    mpfr_set_si(ln_hi.get(), next, MPFR_RNDU);
    mpfr_log(ln_hi.get(), ln_hi.get(), MPFR_RNDU);

    // numerator and denominators are positive (zeta < 1, M >= 2)
    mpfr_div(a_lo.get(), nlo.get(), ln_hi.get(), MPFR_RNDD);
    mpfr_div(a_hi.get(), nhi.get(), ln_lo.get(), MPFR_RNDU);
    mpfr_div(b_lo.get(), nlo.get(), lm_hi.get(), MPFR_RNDD);
    mpfr_div(b_hi.get(), nhi.get(), lm_lo.get(), MPFR_RNDU);

    LocalRatio lr;
    lr.nu = r.nu;
    lr.M = r.M;
    lr.M_next = next;
    lr.log_M = {mpfr_get_d(lm_lo.get(), MPFR_RNDD), mpfr_get_d(lm_hi.get(), MPFR_RNDU)};
    lr.neg_log_zeta = {mpfr_get_d(nlo.get(), MPFR_RNDD), mpfr_get_d(nhi.get(), MPFR_RNDU)};
    lr.a = {mpfr_get_d(a_lo.get(), MPFR_RNDD), mpfr_get_d(a_hi.get(), MPFR_RNDU)};
    lr.b = {mpfr_get_d(b_lo.get(), MPFR_RNDD), mpfr_get_d(b_hi.get(), MPFR_RNDU)};
    // Widths of the exact ratio intervals, excluding the log(M) rounding,
    // which is an artifact of the working precision rather than of zeta.
    mpfr_div(a_lo.get(), nlo.get(), ln_lo.get(), MPFR_RNDD);
    mpfr_div(b_lo.get(), nlo.get(), lm_lo.get(), MPFR_RNDD);
    mpfr_div(a_hi.get(), nhi.get(), ln_lo.get(), MPFR_RNDU);
    mpfr_div(b_hi.get(), nhi.get(), lm_lo.get(), MPFR_RNDU);
    lr.a_width_log2 = log2_width(a_lo.get(), a_hi.get(), prec);
    lr.b_width_log2 = log2_width(b_lo.get(), b_hi.get(), prec);
    out.push_back(lr);
  }
  return out;
}

int default_tail_start(const ApproxSequence& seq) {
  const double threshold = std::pow(static_cast<double>(seq.T), 0.25);
  for (const auto& r : seq.records) {
    if (static_cast<double>(r.M) >= threshold) return r.nu;
  }
  return seq.records.empty() ? 1 : seq.records.back().nu;
}

ExponentEstimate estimate_exponents(const ApproxSequence& seq, std::optional<int> tail_start) {
  ExponentEstimate est;
  est.tail_start = tail_start ? *tail_start : default_tail_start(seq);
  if (est.tail_start < 1) throw InvalidArgument("tail_start must be >= 1");
  for (const auto& lr : local_ratios(seq)) {
    if (lr.nu >= est.tail_start) est.ratios.push_back(lr);
  }
  if (est.ratios.size() < 3) {
    throw InsufficientData("only " + std::to_string(est.ratios.size()) +
                           " ratios from tail_start " + std::to_string(est.tail_start) +
                           " (" + std::to_string(seq.records.size()) + " records); need 3");
  }
  est.alpha_hat = std::numeric_limits<double>::infinity();
  est.beta_hat = -std::numeric_limits<double>::infinity();
  for (const auto& lr : est.ratios) {
    if (lr.a.mid() < est.alpha_hat) {
      est.alpha_hat = lr.a.mid();
      est.alpha_nu = lr.nu;
    }
    if (lr.b.mid() > est.beta_hat) {
      est.beta_hat = lr.b.mid();
      est.beta_nu = lr.nu;
    }
    est.alpha_error = std::max(est.alpha_error, lr.a.width());
    est.beta_error = std::max(est.beta_error, lr.b.width());
  }
  return est;
}

std::string to_json(const ExponentEstimate& est, bool pretty) {
  using nlohmann::json;
  json ratios = json::array();
  for (const auto& r : est.ratios) {
    ratios.push_back({{"nu", r.nu},
                      {"M", std::to_string(r.M)},
                      {"M_next", std::to_string(r.M_next)},
                      {"a", r.a.mid()},
                      {"a_lo", r.a.lo},
                      {"a_hi", r.a.hi},
                      {"b", r.b.mid()},
                      {"b_lo", r.b.lo},
                      {"b_hi", r.b.hi},
                      {"a_width_log2", r.a_width_log2},
                      {"b_width_log2", r.b_width_log2}});
  }
  json doc = {{"alpha_hat", est.alpha_hat},   {"beta_hat", est.beta_hat},
              {"tail_start", est.tail_start}, {"alpha_nu", est.alpha_nu},
              {"beta_nu", est.beta_nu},       {"alpha_error", est.alpha_error},
              {"beta_error", est.beta_error}, {"ratios", ratios}};
  return doc.dump(pretty ? 2 : -1) + "\n";
}

std::string ratios_csv(const std::vector<LocalRatio>& ratios) {
  std::ostringstream os;
  os.precision(17);
  os << "nu,log_M,neg_log_zeta,a,b\n";
  for (const auto& r : ratios) {
    os << r.nu << ',' << r.log_M.mid() << ',' << r.neg_log_zeta.mid() << ',' << r.a.mid() << ','
       << r.b.mid() << '\n';
  }
  return os.str();
}

}  // namespace dioph
