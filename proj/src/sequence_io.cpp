#include "json.hpp"

#include <sstream>

#include "dioph/bestapprox.hpp"
#include "dioph/errors.hpp"

namespace dioph {

namespace {

using nlohmann::json;

std::int64_t parse_int64(const std::string& s, const char* what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InvalidArgument(std::string("malformed ") + what + ": '" + s + "'");
  return v;
}

}  // namespace

std::string to_json(const ApproxSequence& seq) {
  json doc;
  doc["config_hash"] = seq.config_hash;
  doc["m"] = seq.m;
  doc["n"] = seq.n;
  doc["T"] = seq.T;
  doc["precision_cap_bits"] = seq.precision_cap_bits;
  doc["flags"] = {
      {"degenerate_tie", seq.flags.degenerate_tie},
      {"exact_integer_hit", seq.flags.exact_integer_hit},
      {"precision_limited", seq.flags.precision_limited},
      {"terminated_at", seq.flags.terminated_at ? json(*seq.flags.terminated_at) : json(nullptr)},
  };
  json records = json::array();
  for (const auto& r : seq.records) {
    records.push_back({
        {"nu", r.nu},
        {"x", r.x},
        {"y", r.y},
        {"M", std::to_string(r.M)},
        {"zeta_lo", r.zeta.lower().to_decimal()},
        {"zeta_hi", r.zeta.upper().to_decimal()},
        {"bits", r.bits},
    });
  }
  doc["records"] = std::move(records);
  return doc.dump(2) + "\n";
}

ApproxSequence sequence_from_json(const std::string& text) {
  ApproxSequence seq;
  try {
    const json doc = json::parse(text);
    seq.config_hash = doc.at("config_hash").get<std::string>();
    seq.m = doc.at("m").get<int>();
    seq.n = doc.at("n").get<int>();
    seq.T = doc.at("T").get<std::int64_t>();
    seq.precision_cap_bits = doc.at("precision_cap_bits").get<int>();
    const json& flags = doc.at("flags");
    seq.flags.degenerate_tie = flags.at("degenerate_tie").get<bool>();
    seq.flags.exact_integer_hit = flags.at("exact_integer_hit").get<bool>();
    seq.flags.precision_limited = flags.at("precision_limited").get<bool>();
    if (!flags.at("terminated_at").is_null()) {
      seq.flags.terminated_at = flags.at("terminated_at").get<IntVector>();
    }
    for (const json& r : doc.at("records")) {
      BestApproxRecord rec;
      rec.nu = r.at("nu").get<int>();
      rec.x = r.at("x").get<IntVector>();
      rec.y = r.at("y").get<IntVector>();
      rec.M = parse_int64(r.at("M").get<std::string>(), "height");
      rec.zeta = DyadicInterval(Dyadic::parse_decimal(r.at("zeta_lo").get<std::string>()),
                                Dyadic::parse_decimal(r.at("zeta_hi").get<std::string>()));
      rec.bits = r.at("bits").get<int>();
      seq.records.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed sequence document: ") + e.what());
  }
  return seq;
}

std::string to_csv(const ApproxSequence& seq) {
  std::ostringstream os;
  os << "nu,M";
  for (int i = 1; i <= seq.m; ++i) os << ",x" << i;
  for (int j = 1; j <= seq.n; ++j) os << ",y" << j;
  os << ",zeta_lo,zeta_hi,bits\n";
  for (const auto& r : seq.records) {
    os << r.nu << ',' << r.M;
    for (auto v : r.x) os << ',' << v;
    for (auto v : r.y) os << ',' << v;
    os << ',' << r.zeta.lower().to_decimal() << ',' << r.zeta.upper().to_decimal() << ',' << r.bits
       << '\n';
  }
  return os.str();
}

}  // namespace dioph
