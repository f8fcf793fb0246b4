// diophlab: best approximations of linear forms, exponent estimates,
// transference bound tables and structure checks.
//
// Exit codes: 0 success, 1 a check failed, 2 configuration, precision or
// data error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dioph/bestapprox.hpp"
#include "dioph/bounds.hpp"
#include "dioph/config.hpp"
#include "dioph/corpus.hpp"
#include "dioph/errors.hpp"
#include "dioph/exponents.hpp"
#include "dioph/structure.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitError = 2;

struct RunOptions {
  std::string config;
  std::string sequence;
  std::int64_t max_height = 0;
  int workers = 0;
  int precision_cap_bits = 0;
  std::optional<int> tail_start;
  std::string out;
  bool pretty = false;
  bool csv = false;
};

void add_run_options(CLI::App* cmd, RunOptions& o, bool takes_sequence) {
  cmd->add_option("--config", o.config, "run configuration file");
  if (takes_sequence) {
    cmd->add_option("--sequence", o.sequence, "sequence JSON written by `approx` (skips the engine)");
  }
  cmd->add_option("--max-height", o.max_height, "height bound T (overrides the config)")
      ->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
  cmd->add_option("--workers", o.workers, "engine worker threads")->check(CLI::Range(1, 256));
  cmd->add_option("--precision-cap-bits", o.precision_cap_bits, "precision cap in bits")
      ->check(CLI::Range(64, 1 << 20));
  cmd->add_option("--tail-start", o.tail_start, "first record of the exponent tail")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_flag("--pretty", o.pretty, "human-readable tables instead of JSON");
}

void emit(const RunOptions& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    dioph::write_file(o.out, text);
  }
}

dioph::RunConfig resolve_config(const RunOptions& o) {
  if (o.config.empty()) throw dioph::ConfigError("--config is required");
  dioph::RunConfig cfg = dioph::load_config(o.config);
  if (o.max_height > 0) cfg.max_height = o.max_height;
  if (o.workers > 0) cfg.workers = o.workers;
  if (o.precision_cap_bits > 0) cfg.precision_cap_bits = o.precision_cap_bits;
  if (o.tail_start) cfg.tail_start = o.tail_start;
  if (cfg.max_height < 1) throw dioph::ConfigError("max_height missing (set it or pass --max-height)");
  return cfg;
}

dioph::ApproxSequence run_engine(const dioph::RunConfig& cfg) {
  dioph::PrecisionPolicy policy;
  policy.cap_bits = cfg.precision_cap_bits;
  return dioph::compute_sequence(cfg.theta(), cfg.max_height, policy, cfg.workers);
}

/// The sequence from --sequence if given, otherwise computed from --config.
dioph::ApproxSequence obtain_sequence(const RunOptions& o, std::optional<dioph::RunConfig>& cfg) {
  if (!o.config.empty()) cfg = resolve_config(o);
  if (!o.sequence.empty()) {
    dioph::ApproxSequence seq = dioph::sequence_from_json(dioph::read_file(o.sequence));
    if (cfg && cfg->theta().config_hash() != seq.config_hash) {
      throw dioph::ConfigError("sequence was computed for a different configuration");
    }
    return seq;
  }
  if (!cfg) throw dioph::ConfigError("--config or --sequence is required");
  return run_engine(*cfg);
}

std::optional<int> tail_override(const RunOptions& o, const std::optional<dioph::RunConfig>& cfg) {
  if (o.tail_start) return o.tail_start;
  if (cfg) return cfg->tail_start;
  return std::nullopt;
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

std::string join(const dioph::IntVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

std::string sequence_table(const dioph::ApproxSequence& seq) {
  std::ostringstream s;
  s << "hash " << seq.config_hash << "  m=" << seq.m << " n=" << seq.n << "  T=" << seq.T << "  "
    << seq.records.size() << " records\n";
  s << std::setw(4) << "nu" << std::setw(12) << "M" << "  " << std::left << std::setw(14)
    << "zeta" << std::right << "  x / y\n";
  for (const auto& r : seq.records) {
    s << std::setw(4) << r.nu << std::setw(12) << r.M << "  " << std::left << std::setw(14)
      << fmt(r.zeta.upper().to_double()) << std::right << "  " << join(r.x) << " / " << join(r.y)
      << "\n";
  }
  if (seq.flags.terminated_at) s << "terminated at " << join(*seq.flags.terminated_at) << "\n";
  if (seq.flags.degenerate_tie) s << "flag: degenerate tie\n";
  if (seq.flags.exact_integer_hit) s << "flag: exact integer hit\n";
  return s.str();
}

// ---------------------------------------------------------------- approx

int cmd_approx(const RunOptions& o) {
  const dioph::RunConfig cfg = resolve_config(o);
  const dioph::ApproxSequence seq = run_engine(cfg);
  if (o.csv) {
    emit(o, dioph::to_csv(seq));
  } else {
    emit(o, o.pretty ? sequence_table(seq) : dioph::to_json(seq));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const RunOptions& o, int bits) {
  const dioph::RunConfig cfg = resolve_config(o);
  const dioph::ApproxSequence seq = dioph::oracle_sequence(cfg.theta(), cfg.max_height, bits);
  if (o.csv) {
    emit(o, dioph::to_csv(seq));
  } else {
    emit(o, o.pretty ? sequence_table(seq) : dioph::to_json(seq));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- verify

/// Records of `seq` below height T_o; the oracle at T_o must reproduce them.
dioph::ApproxSequence truncate(const dioph::ApproxSequence& seq, std::int64_t T) {
  dioph::ApproxSequence out = seq;
  out.T = T;
  out.records.clear();
  for (const auto& r : seq.records) {
    if (r.M <= T) out.records.push_back(r);
  }
  return out;
}

int cmd_verify(const RunOptions& o, std::int64_t oracle_T, bool skip_oracle) {
  std::optional<dioph::RunConfig> cfg;
  if (o.config.empty()) throw dioph::ConfigError("--config is required (theta is needed to verify)");
  const dioph::ApproxSequence seq = obtain_sequence(o, cfg);
  const dioph::ThetaMatrix theta = cfg->theta();
  const dioph::VerifyReport report = dioph::verify_sequence(theta, seq);
  json doc = {{"config_hash", seq.config_hash},
              {"T", seq.T},
              {"records", seq.records.size()},
              {"verify_ok", report.ok},
              {"points_checked", report.points_checked},
              {"failure", report.failure},
              {"counterexample",
               report.counterexample ? json(*report.counterexample) : json(nullptr)}};
  bool ok = report.ok;
  if (!skip_oracle) {
    const std::int64_t T = std::min(seq.T, oracle_T > 0 ? oracle_T : std::int64_t{200});
    const dioph::ApproxSequence oracle = dioph::oracle_sequence(theta, T);
    std::string why;
    const bool same = dioph::same_records(truncate(seq, T), oracle, &why);
    doc["oracle"] = {{"T", T}, {"match", same}, {"difference", why}};
    ok = ok && same;
  }
  doc["ok"] = ok;
  if (o.pretty) {
    std::ostringstream s;
    s << "verify: " << (report.ok ? "ok" : "FAILED " + report.failure) << " ("
      << report.points_checked << " points)\n";
    if (doc.contains("oracle")) {
      s << "oracle at T=" << doc["oracle"]["T"].get<std::int64_t>() << ": "
        << (doc["oracle"]["match"].get<bool>() ? "match"
                                               : "DIFFERS " + doc["oracle"]["difference"].get<std::string>())
        << "\n";
    }
    emit(o, s.str());
  } else {
    emit(o, doc.dump(2) + "\n");
  }
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- exponents

std::string exponents_table(const dioph::ExponentEstimate& est) {
  std::ostringstream s;
  s << "alpha_hat " << fmt(est.alpha_hat) << " (nu " << est.alpha_nu << ")   beta_hat "
    << fmt(est.beta_hat) << " (nu " << est.beta_nu << ")   tail from nu " << est.tail_start << "\n";
  s << std::setw(4) << "nu" << std::setw(12) << "M" << std::setw(12) << "M_next" << std::setw(12)
    << "a" << std::setw(12) << "b" << "\n";
  for (const auto& r : est.ratios) {
    s << std::setw(4) << r.nu << std::setw(12) << r.M << std::setw(12) << r.M_next << std::setw(12)
      << fmt(r.a.mid()) << std::setw(12) << fmt(r.b.mid()) << "\n";
  }
  return s.str();
}

int cmd_exponents(const RunOptions& o) {
  std::optional<dioph::RunConfig> cfg;
  const dioph::ApproxSequence seq = obtain_sequence(o, cfg);
  const dioph::ExponentEstimate est = dioph::estimate_exponents(seq, tail_override(o, cfg));
  if (o.csv) {
    emit(o, dioph::ratios_csv(dioph::local_ratios(seq)));
  } else {
    emit(o, o.pretty ? exponents_table(est) : dioph::to_json(est));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- analyze

std::string analyze_table(const dioph::StructureReport& r) {
  std::ostringstream s;
  s << r.runs.size() << " coplanar runs, " << r.quadruples.size() << " quadruples, independent pairs from nu "
    << r.independent_from << "\n";
  for (const auto& d : r.det_checks) {
    s << "  run [" << d.nu << ", " << d.k << "]  det " << d.det.get_str() << "  bound "
      << fmt(d.bound.to_double()) << (d.independent ? (d.ok ? "  ok" : "  VIOLATED") : "  rank<4")
      << "\n";
  }
  for (const auto& l : r.lemma_ratios) {
    s << "  lemma [" << l.a << ", " << l.b << "] ratio " << fmt(l.ratio)
      << (l.within(r.lemma_threshold) ? "" : "  above threshold") << "\n";
  }
  for (const auto& t : r.tail_ranks) s << "  tail rank from " << t.start << ": " << t.rank << "\n";
  if (!r.note.empty()) s << "note: " << r.note << "\n";
  return s.str();
}

int cmd_analyze(const RunOptions& o, double threshold) {
  std::optional<dioph::RunConfig> cfg;
  const dioph::ApproxSequence seq = obtain_sequence(o, cfg);
  const dioph::StructureReport report =
      dioph::analyze(seq, dioph::case_of(seq.m, seq.n), threshold);
  emit(o, o.pretty ? analyze_table(report) : dioph::to_json(report));
  for (const auto& d : report.det_checks) {
    if (d.independent && !d.ok) return kExitCheckFailed;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- bounds

struct BoundsOptions {
  std::string case_name = "m1n3";
  std::vector<double> alphas;
  std::string grid;  // lo:hi:n
};

std::vector<dioph::real_t> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw dioph::InvalidArgument("--grid expects lo:hi:n");
  try {
    const long double lo = std::stold(parts[0]);
    const long double hi = std::stold(parts[1]);
    const int n = std::stoi(parts[2]);
    return dioph::linear_grid(lo, hi, n);
  } catch (const std::logic_error&) {
    throw dioph::InvalidArgument("--grid expects lo:hi:n");
  }
}

/// Whether alpha lies in the domain of the case's g function.
bool g_defined(dioph::CaseTag c, dioph::real_t alpha) {
  switch (c) {
    case dioph::CaseTag::m1n3:
      return alpha > 0;
    case dioph::CaseTag::m3n1:
      return alpha >= 3;
    case dioph::CaseTag::m2n2:
      return alpha >= 1;
    case dioph::CaseTag::other:
      break;
  }
  return false;
}

int cmd_bounds(const RunOptions& o, const BoundsOptions& b) {
  const dioph::CaseTag c = dioph::case_from_string(b.case_name);
  if (c == dioph::CaseTag::other) throw dioph::InvalidArgument("--case must be m1n3, m3n1 or m2n2");
  std::vector<dioph::real_t> grid;
  for (double a : b.alphas) grid.push_back(a);
  if (!b.grid.empty()) {
    const auto g = parse_grid(b.grid);
    grid.insert(grid.end(), g.begin(), g.end());
  }
  if (grid.empty()) throw dioph::InvalidArgument("give --alpha or --grid");
  for (auto a : grid) {
    if (!g_defined(c, a)) {
      throw dioph::DomainError("alpha " + fmt(static_cast<double>(a)) + " outside the domain of " +
                               b.case_name);
    }
  }
  const std::vector<dioph::BoundRow> rows = dioph::compare_bounds(c, grid);
  if (o.csv) {
    emit(o, dioph::bounds_table_csv(rows));
    return kExitOk;
  }
  json table = json::array();
  std::ostringstream pretty;
  pretty << "case " << b.case_name << "   alpha0 = " << fmt(static_cast<double>(dioph::alpha0()), 12)
         << "\n";
  pretty << std::setw(14) << "alpha" << std::setw(16) << "g" << std::setw(16) << "new"
         << std::setw(16) << "jarnik" << "  winner\n";
  for (const auto& r : rows) {
    json row = {{"alpha", static_cast<double>(r.alpha)},
                {"g", static_cast<double>(dioph::g_case(c, r.alpha))},
                {"new", static_cast<double>(r.new_rhs)},
                {"jarnik", static_cast<double>(r.jarnik.value)},
                {"jarnik_applicable", r.jarnik.applicable},
                {"winner", dioph::to_string(r.winner)}};
    pretty << std::setw(14) << fmt(static_cast<double>(r.alpha), 10) << std::setw(16)
           << fmt(static_cast<double>(dioph::g_case(c, r.alpha)), 10) << std::setw(16)
           << fmt(static_cast<double>(r.new_rhs), 10) << std::setw(16)
           << (r.jarnik.applicable ? fmt(static_cast<double>(r.jarnik.value), 10) : "n/a") << "  "
           << dioph::to_string(r.winner) << "\n";
    if (c == dioph::CaseTag::m1n3 && r.alpha >= 1.0L / 3 && r.alpha < 1) {
      try {
        const dioph::SysSolution s = dioph::solve_sys(r.alpha);
        row["sys"] = {{"gamma", static_cast<double>(s.gamma)},
                      {"delta", static_cast<double>(s.delta)},
                      {"near_singular", s.near_singular}};
        pretty << std::setw(14) << "" << "  sys: gamma " << fmt(static_cast<double>(s.gamma), 10)
               << "  delta " << fmt(static_cast<double>(s.delta), 10)
               << (s.near_singular ? "  (near singular)" : "") << "\n";
      } catch (const dioph::SingularSystem&) {
        row["sys"] = nullptr;
      }
    }
    table.push_back(row);
  }
  if (o.pretty) {
    emit(o, pretty.str());
  } else {
    json doc = {{"case", b.case_name}, {"alpha0", static_cast<double>(dioph::alpha0())}, {"rows", table}};
    emit(o, doc.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- theorem

int cmd_theorem(const RunOptions& o, double slack) {
  std::optional<dioph::RunConfig> cfg;
  const dioph::ApproxSequence seq = obtain_sequence(o, cfg);
  const dioph::CaseTag c = dioph::case_of(seq.m, seq.n);
  const dioph::ExponentEstimate est = dioph::estimate_exponents(seq, tail_override(o, cfg));
  json doc = {{"config_hash", seq.config_hash},
              {"case", dioph::to_string(c)},
              {"T", seq.T},
              {"records", seq.records.size()},
              {"alpha_hat", est.alpha_hat},
              {"beta_hat", est.beta_hat},
              {"tail_start", est.tail_start},
              {"slack", slack}};
  int code = kExitOk;
  std::string verdict;
  if (c == dioph::CaseTag::other) {
    verdict = "not_applicable";
    doc["reason"] = "no transference bound for this shape";
  } else if (!dioph::in_domain(c, est.alpha_hat)) {
    verdict = "out_of_domain";
    doc["reason"] = "alpha_hat outside the case's domain";
  } else {
    const double rhs = static_cast<double>(dioph::rhs_new(c, est.alpha_hat));
    doc["rhs"] = rhs;
    doc["margin"] = est.beta_hat + slack - rhs;
    const bool holds = est.beta_hat + slack >= rhs;
    verdict = holds ? "consistent" : "violated";
    if (!holds) code = kExitCheckFailed;
  }
  doc["verdict"] = verdict;
  if (o.pretty) {
    std::ostringstream s;
    s << "case " << dioph::to_string(c) << "  T=" << seq.T << "  alpha_hat " << fmt(est.alpha_hat)
      << "  beta_hat " << fmt(est.beta_hat);
    if (doc.contains("rhs")) s << "  alpha*g(alpha) " << fmt(doc["rhs"].get<double>());
    s << "\nverdict: " << verdict << "\n";
    emit(o, s.str());
  } else {
    emit(o, doc.dump(2) + "\n");
  }
  return code;
}

// ---------------------------------------------------------------- corpus

int cmd_corpus(const std::string& dir) {
  const auto corpus = dioph::builtin_corpus();
  std::filesystem::create_directories(dir);
  for (const auto& inst : corpus) {
    const std::filesystem::path p = std::filesystem::path(dir) / (inst.name + ".cfg");
    dioph::write_file(p.string(), dioph::to_config_text(dioph::to_run_config(inst)));
  }
  dioph::write_file((std::filesystem::path(dir) / "manifest.json").string(),
                    dioph::manifest_json(corpus));
  std::cout << "wrote " << corpus.size() << " configs and manifest.json to " << dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diophlab: best approximations, exponents and transference bounds"};
  app.require_subcommand(1);

  RunOptions approx_o, oracle_o, verify_o, exp_o, analyze_o, bounds_o, theorem_o;
  int oracle_bits = 8192;
  std::int64_t verify_oracle_T = 200;
  bool verify_skip_oracle = false;
  double lemma_threshold = dioph::kDefaultLemmaThreshold;
  double slack = 0.1;
  BoundsOptions bounds;
  std::string corpus_dir;

  auto* approx = app.add_subcommand("approx", "compute the best-approximation sequence");
  add_run_options(approx, approx_o, false);
  approx->add_flag("--csv", approx_o.csv, "CSV instead of JSON");

  auto* oracle = app.add_subcommand("oracle", "brute-force reference sequence");
  add_run_options(oracle, oracle_o, false);
  oracle->add_flag("--csv", oracle_o.csv, "CSV instead of JSON");
  oracle->add_option("--bits", oracle_bits, "fixed precision of the scan")->check(CLI::Range(64, 1 << 20));

  auto* verify = app.add_subcommand("verify", "re-check a sequence and diff it against the oracle");
  add_run_options(verify, verify_o, true);
  verify->add_option("--oracle-max-height", verify_oracle_T, "height of the oracle comparison")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--no-oracle", verify_skip_oracle, "skip the oracle comparison");

  auto* exponents = app.add_subcommand("exponents", "local exponent ratios and estimates");
  add_run_options(exponents, exp_o, true);
  exponents->add_flag("--csv", exp_o.csv, "per-record ratio CSV (log-log plot data)");

  auto* analyze = app.add_subcommand("analyze", "coplanar runs, determinant and rank checks");
  add_run_options(analyze, analyze_o, true);
  analyze->add_option("--lemma-threshold", lemma_threshold, "report ratios above this value")
      ->check(CLI::PositiveNumber);

  auto* bounds_cmd = app.add_subcommand("bounds", "bound functions and comparison tables");
  bounds_cmd->add_option("--case", bounds.case_name, "m1n3, m3n1 or m2n2");
  bounds_cmd->add_option("--alpha", bounds.alphas, "alpha values");
  bounds_cmd->add_option("--grid", bounds.grid, "lo:hi:n evenly spaced alphas");
  bounds_cmd->add_option("--out", bounds_o.out, "output file (default: stdout)");
  bounds_cmd->add_flag("--pretty", bounds_o.pretty, "human-readable table");
  bounds_cmd->add_flag("--csv", bounds_o.csv, "CSV table");

  auto* theorem = app.add_subcommand("theorem", "check beta_hat + slack >= alpha_hat * g(alpha_hat)");
  add_run_options(theorem, theorem_o, true);
  theorem->add_option("--slack", slack, "tolerance of the check")->check(CLI::NonNegativeNumber);

  auto* corpus = app.add_subcommand("corpus", "write the built-in corpus configs and manifest");
  corpus->add_option("--write-dir", corpus_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*approx) return cmd_approx(approx_o);
    if (*oracle) return cmd_oracle(oracle_o, oracle_bits);
    if (*verify) return cmd_verify(verify_o, verify_oracle_T, verify_skip_oracle);
    if (*exponents) return cmd_exponents(exp_o);
    if (*analyze) return cmd_analyze(analyze_o, lemma_threshold);
    if (*bounds_cmd) return cmd_bounds(bounds_o, bounds);
    if (*theorem) return cmd_theorem(theorem_o, slack);
    if (*corpus) return cmd_corpus(corpus_dir);
  } catch (const dioph::PrecisionExhausted& e) {
    std::cerr << "precision exhausted";
    if (e.height()) std::cerr << " at height " << *e.height();
    std::cerr << ": " << e.what() << "\n";
    return kExitError;
  } catch (const dioph::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitError;
  } catch (const dioph::InsufficientData& e) {
    std::cerr << "insufficient data: " << e.what() << "\n";
    return kExitError;
  } catch (const dioph::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
