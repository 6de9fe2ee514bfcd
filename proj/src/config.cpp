#include "qmon/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace qmon {

std::vector<double> log_spaced(double start, double stop, Index count) {
  if (!(start > 0.0) || !(stop > start))
    throw ValidationError("log range requires 0 < start < stop");
  if (count < 2) throw ValidationError("log range requires at least 2 points");
  const double la = std::log10(start);
  const double lb = std::log10(stop);
  std::vector<double> out(count);
  for (Index k = 0; k < count; ++k)
    out[k] = std::pow(10.0, la + (lb - la) * static_cast<double>(k) /
                                static_cast<double>(count - 1));
  out.front() = start;
  out.back() = stop;
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  std::ostringstream msg;
  msg << "line " << line << ": " << what;
  throw ParseError(msg.str());
}

double to_double(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(line, "not a number: '" + s + "'");
  return v;
}

long to_long(const std::string& s, int line) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    fail(line, "not an integer: '" + s + "'");
  return v;
}

bool to_bool(const std::string& s, int line) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  fail(line, "not a boolean: '" + s + "'");
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

using SectionMap = std::map<std::string, std::map<std::string, Entry>>;

SectionMap read_sections(const std::string& text) {
  static const std::map<std::string, std::vector<std::string>> known = {
      {"system", {"mass", "omega", "beta", "beta_tilde", "hbar"}},
      {"measurement", {"tau", "mode_index", "delta_a"}},
      {"numerics",
       {"eps_points", "omega_dt", "resolution_scale", "eps_width_factor",
        "grid_half_width", "grid_points", "time_steps"}},
      {"output", {"directory", "plots", "profiles"}},
      {"run", {"parallel"}},
  };

  SectionMap sections;
  std::istringstream in(text);
  std::string raw;
  std::string current;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      current = trim(s.substr(1, s.size() - 2));
      if (known.find(current) == known.end())
        fail(line, "unknown section [" + current + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    if (current.empty()) fail(line, "key outside any section");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const auto& keys = known.at(current);
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      fail(line, "unknown key '" + key + "' in section [" + current + "]");
    if (value.empty()) fail(line, "empty value for '" + key + "'");
    auto [it, inserted] = sections[current].emplace(key, Entry{value, line});
    (void)it;
    if (!inserted) fail(line, "duplicate key '" + key + "'");
  }
  return sections;
}

const Entry* find(const SectionMap& sections, const std::string& section,
                  const std::string& key) {
  const auto s = sections.find(section);
  if (s == sections.end()) return nullptr;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  return &k->second;
}

std::vector<double> parse_delta_a(const Entry& entry) {
  const std::vector<std::string> words = split_words(entry.value);
  if (words.empty()) fail(entry.line, "delta_a needs at least one value");

  if (words[0] == "logspace" || words[0] == "perdecade") {
    if (words.size() != 4)
      fail(entry.line, words[0] + " takes start stop count");
    const double start = to_double(words[1], entry.line);
    const double stop = to_double(words[2], entry.line);
    const long n = to_long(words[3], entry.line);
    if (words[0] == "logspace") return log_spaced(start, stop, n);
    // n points per decade, both endpoints included.
    if (n < 2) fail(entry.line, "perdecade needs at least 2 points per decade");
    if (!(start > 0.0) || !(stop > start))
      fail(entry.line, "perdecade requires 0 < start < stop");
    const double decades = std::log10(stop) - std::log10(start);
    const Index count =
        static_cast<Index>(std::lround(decades * static_cast<double>(n - 1))) +
        1;
    return log_spaced(start, stop, std::max<Index>(count, 2));
  }

  std::vector<double> out;
  for (const auto& w : words) out.push_back(to_double(w, entry.line));
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  const SectionMap sections = read_sections(text);
  RunConfig cfg;

  double mass = 1.0, omega = 1.0, hbar = 1.0, beta = 0.0;
  if (const Entry* e = find(sections, "system", "mass"))
    mass = to_double(e->value, e->line);
  if (const Entry* e = find(sections, "system", "omega"))
    omega = to_double(e->value, e->line);
  if (const Entry* e = find(sections, "system", "hbar"))
    hbar = to_double(e->value, e->line);
  const Entry* beta_abs = find(sections, "system", "beta");
  const Entry* beta_rel = find(sections, "system", "beta_tilde");
  if (beta_abs && beta_rel)
    throw ValidationError("give either beta or beta_tilde, not both");
  if (beta_abs) beta = to_double(beta_abs->value, beta_abs->line);
  if (beta_rel)
    beta = to_double(beta_rel->value, beta_rel->line) * mass * mass * omega *
           omega * omega / hbar;
  cfg.system = PhysicalSystem(mass, omega, beta, hbar);

  cfg.tau = pi / cfg.system.omega;
  if (const Entry* e = find(sections, "measurement", "tau"))
    cfg.tau = to_double(e->value, e->line);
  if (const Entry* e = find(sections, "measurement", "mode_index"))
    cfg.mode_index = static_cast<int>(to_long(e->value, e->line));
  // Constructing a setup validates tau and mode_index once up front.
  MeasurementSetup(cfg.tau, 1.0, cfg.mode_index);

  const Entry* da = find(sections, "measurement", "delta_a");
  if (!da) throw ValidationError("delta_a is required");
  cfg.delta_a = parse_delta_a(*da);
  for (double v : cfg.delta_a)
    if (!(v > 0.0) || std::isnan(v))
      throw ValidationError("delta_a values must be positive");

  if (const Entry* e = find(sections, "numerics", "eps_points")) {
    const long v = to_long(e->value, e->line);
    if (v < 3 || v % 2 == 0)
      throw ValidationError("eps_points must be odd and at least 3");
    cfg.numerics.eps_points = v;
  }
  if (const Entry* e = find(sections, "numerics", "omega_dt")) {
    const double v = to_double(e->value, e->line);
    if (!(v > 0.0) || v > 0.05)
      throw ValidationError("omega_dt must be in (0, 0.05]");
    cfg.numerics.base_omega_dt = v;
  }
  if (const Entry* e = find(sections, "numerics", "resolution_scale")) {
    const double v = to_double(e->value, e->line);
    if (!(v > 0.0)) throw ValidationError("resolution_scale must be positive");
    cfg.numerics.resolution_scale = v;
  }
  if (const Entry* e = find(sections, "numerics", "eps_width_factor")) {
    const double v = to_double(e->value, e->line);
    if (!(v > 0.0)) throw ValidationError("eps_width_factor must be positive");
    cfg.numerics.eps_width_factor = v;
  }
  if (const Entry* e = find(sections, "numerics", "grid_half_width")) {
    const double v = to_double(e->value, e->line);
    if (v < 0.0) throw ValidationError("grid_half_width must be non-negative");
    cfg.numerics.override_half_width = v;
  }
  if (const Entry* e = find(sections, "numerics", "grid_points")) {
    const long v = to_long(e->value, e->line);
    if (v != 0 && (v < 3 || v % 2 == 0))
      throw ValidationError("grid_points must be odd and at least 3");
    cfg.numerics.override_num_points = v;
  }
  if (const Entry* e = find(sections, "numerics", "time_steps")) {
    const long v = to_long(e->value, e->line);
    if (v < 0) throw ValidationError("time_steps must be non-negative");
    cfg.numerics.override_num_steps = v;
  }

  if (const Entry* e = find(sections, "output", "directory"))
    cfg.output.directory = e->value;
  if (const Entry* e = find(sections, "output", "plots"))
    cfg.output.plots = to_bool(e->value, e->line);
  if (const Entry* e = find(sections, "output", "profiles"))
    cfg.output.profiles = to_bool(e->value, e->line);

  if (const Entry* e = find(sections, "run", "parallel")) {
    const long v = to_long(e->value, e->line);
    if (v < 0) throw ValidationError("parallel must be non-negative");
    cfg.parallel = static_cast<int>(v);
  }
  cfg.numerics.threads = cfg.parallel;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace qmon
