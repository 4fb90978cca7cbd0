#include "paralayer/config.hpp"

#include <charconv>
#include <cctype>

#include "paralayer/csv.hpp"

namespace paralayer {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// from_chars keeps parsing locale-free; partial consumption is an error
template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ConfigError("config: cannot parse value for '" + key + "': " + value);
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const std::size_t comma = value.find(',', pos);
    const std::string item = trim(value.substr(pos, comma - pos));
    if (item.empty()) throw ConfigError("config: empty entry in '" + key + "'");
    out.push_back(parse_number<double>(key, item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "alpha") cfg.alpha = parse_number<double>(key, value);
  else if (key == "k") cfg.k = parse_number<double>(key, value);
  else if (key == "R") cfg.R = parse_number<double>(key, value);
  else if (key == "cap") cfg.cap = value;
  else if (key == "a") cfg.a = parse_number<double>(key, value);
  else if (key == "p") cfg.p = parse_number<double>(key, value);
  else if (key == "s_max") cfg.s_max = parse_number<double>(key, value);
  else if (key == "h") cfg.h = parse_number<double>(key, value);
  else if (key == "n") cfg.n = parse_number<long long>(key, value);
  else if (key == "n_s") cfg.n_s = parse_number<long long>(key, value);
  else if (key == "n_u") cfg.n_u = parse_number<long long>(key, value);
  else if (key == "m_max") cfg.m_max = parse_number<long long>(key, value);
  else if (key == "seed") cfg.seed = parse_number<unsigned long long>(key, value);
  else if (key == "E_list") cfg.E_list = parse_list(key, value);
  else if (key == "output_dir") cfg.output_dir = value;
  else throw ConfigError("config: unknown key '" + key + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl - pos);
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (!line.empty()) {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config: line " + std::to_string(lineno) + " has no '='");
      set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("config: override must look like key=value: " + assignment);
  set_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void validate(const RunConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
  if (!(cfg.alpha > 1.0)) fail("alpha must exceed 1");
  if (!(cfg.k > 0.0)) fail("k must be positive");
  if (cfg.R < 0.0) fail("R must be nonnegative");
  if (cfg.cap != "pure_power" && cfg.cap != "quintic_blend")
    fail("cap must be pure_power or quintic_blend");
  if (cfg.cap == "pure_power" && cfg.R != 0.0) fail("pure_power cap requires R = 0");
  if (cfg.cap == "quintic_blend" && !(cfg.R > 0.0)) fail("quintic_blend cap requires R > 0");
  if (!(cfg.a > 0.0)) fail("a must be positive");
  if (cfg.p < 0.0) fail("p must be nonnegative");
  if (!(cfg.s_max > 0.0)) fail("s_max must be positive");
  if (!(cfg.h > 0.0)) fail("h must be positive");
  if (cfg.n < 100) fail("n must be at least 100");
  if (cfg.n_s < 8) fail("n_s must be at least 8");
  if (cfg.n_u < 8) fail("n_u must be at least 8");
  if (cfg.m_max < 0) fail("m_max must be nonnegative");
  if (cfg.E_list.empty()) fail("E_list must not be empty");
  for (const double e : cfg.E_list)
    if (!(e > 0.0) || !(e < 1.0)) fail("E_list entries must lie in (0,1)");
  for (std::size_t i = 1; i < cfg.E_list.size(); ++i)
    if (!(cfg.E_list[i] < cfg.E_list[i - 1])) fail("E_list must be strictly decreasing");
  if (cfg.output_dir.empty()) fail("output_dir must not be empty");
}

std::string config_echo(const RunConfig& cfg) {
  std::string out;
  auto put = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  put("alpha", csv_number(cfg.alpha));
  put("k", csv_number(cfg.k));
  put("R", csv_number(cfg.R));
  put("cap", cfg.cap);
  put("a", csv_number(cfg.a));
  put("p", csv_number(cfg.p));
  put("s_max", csv_number(cfg.s_max));
  put("h", csv_number(cfg.h));
  put("n", csv_number(cfg.n));
  put("n_s", csv_number(cfg.n_s));
  put("n_u", csv_number(cfg.n_u));
  put("m_max", csv_number(cfg.m_max));
  put("seed", csv_number(static_cast<long long>(cfg.seed)));
  std::string list;
  for (std::size_t i = 0; i < cfg.E_list.size(); ++i) {
    if (i) list += ',';
    list += csv_number(cfg.E_list[i]);
  }
  put("E_list", list);
  put("output_dir", cfg.output_dir);
  return out;
}

LayerProfile<double> make_profile(const RunConfig& cfg) {
  const CapKind kind =
      cfg.cap == "quintic_blend" ? CapKind::QuinticBlend : CapKind::PurePower;
  return LayerProfile<double>::make(cfg.alpha, cfg.k, cfg.R, kind);
}

}  // namespace paralayer
