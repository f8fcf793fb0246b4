#include "dioph/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class Int>
Int parse_int(const std::string& v, const std::string& key, int line) {
  Int out{};
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + " must be an integer, got '" + v + "'", line);
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  std::map<std::pair<int, int>, std::pair<CertifiedReal, int>> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view view = raw;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const std::string content = trim(view);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (value.empty()) throw ConfigError("empty value for " + key, line);
    if (!seen.emplace(key, line).second) throw ConfigError("duplicate key " + key, line);

    if (key == "name") {
      cfg.name = value;
    } else if (key == "m") {
      cfg.m = parse_int<int>(value, key, line);
      if (cfg.m < 1) throw ConfigError("m must be >= 1", line);
    } else if (key == "n") {
      cfg.n = parse_int<int>(value, key, line);
      if (cfg.n < 1) throw ConfigError("n must be >= 1", line);
    } else if (key == "max_height") {
      cfg.max_height = parse_int<std::int64_t>(value, key, line);
      if (cfg.max_height < 1) throw ConfigError("max_height must be >= 1", line);
    } else if (key == "precision_cap_bits") {
      cfg.precision_cap_bits = parse_int<int>(value, key, line);
      if (cfg.precision_cap_bits < 1) throw ConfigError("precision_cap_bits must be >= 1", line);
    } else if (key == "workers") {
      cfg.workers = parse_int<int>(value, key, line);
      if (cfg.workers < 1) throw ConfigError("workers must be >= 1", line);
    } else if (key == "tail_start") {
      cfg.tail_start = parse_int<int>(value, key, line);
      if (*cfg.tail_start < 1) throw ConfigError("tail_start must be >= 1", line);
    } else if (key.rfind("entry.", 0) == 0) {
      const std::string idx = key.substr(6);
      const auto dot = idx.find('.');
      if (dot == std::string::npos) throw ConfigError("entry key must be entry.<j>.<i>", line);
      const int j = parse_int<int>(idx.substr(0, dot), key, line);
      const int i = parse_int<int>(idx.substr(dot + 1), key, line);
      try {
        entries.emplace(std::make_pair(j, i), std::make_pair(CertifiedReal::parse(value), line));
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError(key + ": " + e.what(), line);
      }
    } else {
      throw ConfigError("unknown key " + key, line);
    }
  }
  if (cfg.m == 0) throw ConfigError("missing key m");
  if (cfg.n == 0) throw ConfigError("missing key n");
  for (const auto& [ji, v] : entries) {
    if (ji.first < 1 || ji.first > cfg.n || ji.second < 1 || ji.second > cfg.m) {
      throw ConfigError("entry." + std::to_string(ji.first) + "." + std::to_string(ji.second) +
                            " is outside the " + std::to_string(cfg.n) + " x " +
                            std::to_string(cfg.m) + " matrix",
                        v.second);
    }
  }
  for (int j = 1; j <= cfg.n; ++j) {
    for (int i = 1; i <= cfg.m; ++i) {
      auto it = entries.find({j, i});
      if (it == entries.end()) {
        throw ConfigError("missing entry." + std::to_string(j) + "." + std::to_string(i));
      }
      cfg.entries.push_back(it->second.first);
    }
  }
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
  if (!out) throw ConfigError("failed writing " + path);
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string to_config_text(const RunConfig& cfg) {
  std::ostringstream os;
  if (!cfg.name.empty()) os << "name = " << cfg.name << '\n';
  os << "m = " << cfg.m << '\n' << "n = " << cfg.n << '\n';
  if (cfg.max_height > 0) os << "max_height = " << cfg.max_height << '\n';
  os << "precision_cap_bits = " << cfg.precision_cap_bits << '\n';
  os << "workers = " << cfg.workers << '\n';
  if (cfg.tail_start) os << "tail_start = " << *cfg.tail_start << '\n';
  for (int j = 1; j <= cfg.n; ++j) {
    for (int i = 1; i <= cfg.m; ++i) {
      os << "entry." << j << '.' << i << " = "
         << cfg.entries[static_cast<std::size_t>((j - 1) * cfg.m + (i - 1))].describe() << '\n';
    }
  }
  return os.str();
}

}  // namespace dioph
