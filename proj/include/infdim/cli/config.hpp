#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "infdim/diagnostics.hpp"
#include "infdim/law.hpp"

namespace infdim::cli {

/// Malformed configuration; `line` is 0 when the problem is not tied to a line.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& what, int line = 0)
      : InvalidArgument(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ExperimentConfig {
  // [problem]
  std::string op = "volterra";
  std::optional<Interval> interval;
  std::string datum;
  std::string exact;  // empty: no exact solution
  // [truncation]
  std::string trial = "legendre";
  std::string test;  // empty: derived from the trial basis
  std::vector<long> n_list;
  std::string solver = "qr";
  double tol = 1e-10;
  std::string solution_family = "min-norm";
  std::string krylov_test = "image";
  // [noise]
  std::string noise_preset;
  std::string sigma, g, nu;
  // [output]
  std::string csv;
  std::vector<long> track = default_tracked;

  bool noise_mode() const { return !noise_preset.empty() || !sigma.empty() || !g.empty() || !nu.empty(); }
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// "2..100", "0..2000:10", "4,10,50,100", or a comma list mixing both.
inline std::vector<long> parse_n_list(std::string_view text) {
  std::vector<long> out;
  auto to_long = [&](std::string_view s) {
    long v = 0;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw ConfigError("bad integer '" + std::string(s) + "' in N list '" + std::string(text) + "'");
    }
    return v;
  };
  for (std::string_view item : detail::split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(to_long(item));
      continue;
    }
    const long a = to_long(item.substr(0, dots));
    std::string_view rest = item.substr(dots + 2);
    long step = 1;
    if (const auto c = rest.find(':'); c != std::string_view::npos) {
      step = to_long(rest.substr(c + 1));
      rest = rest.substr(0, c);
    }
    const long b = to_long(rest);
    if (step < 1) throw ConfigError("N list step must be >= 1");
    for (long n = a; n <= b; n += step) out.push_back(n);
  }
  if (out.empty()) throw ConfigError("empty N list");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) throw ConfigError("N list must be strictly increasing: '" + std::string(text) + "'");
  return out;
}

/// Inverse of parse_n_list; runs of three or more equally spaced values become ranges.
inline std::string format_n_list(const std::vector<long>& ns) {
  std::string out;
  std::size_t i = 0;
  while (i < ns.size()) {
    std::size_t j = i + 1;
    if (j < ns.size()) {
      const long step = ns[j] - ns[i];
      while (j + 1 < ns.size() && ns[j + 1] - ns[j] == step) ++j;
      if (j - i >= 2) {
        if (!out.empty()) out += ',';
        out += std::to_string(ns[i]) + ".." + std::to_string(ns[j]);
        if (step != 1) out += ":" + std::to_string(step);
        i = j + 1;
        continue;
      }
    }
    if (!out.empty()) out += ',';
    out += std::to_string(ns[i]);
    ++i;
  }
  return out;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double config_double(const std::string& v, int line) {
  try {
    return infdim::detail::parse_double(v);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what(), line);
  }
}

}  // namespace detail

/// Sectioned key = value text. '#' or ';' start a comment line.
inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  c.track.clear();
  bool track_set = false;
  std::string section;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = detail::trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = detail::trim(std::string_view(s).substr(1, s.size() - 2));
      if (section != "problem" && section != "truncation" && section != "noise" && section != "output") {
        throw ConfigError("unknown section [" + section + "]", line);
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = detail::trim(std::string_view(s).substr(0, eq));
    const std::string val = detail::trim(std::string_view(s).substr(eq + 1));
    if (section.empty()) throw ConfigError("key '" + key + "' outside any section", line);
    const std::string full = section + "." + key;
    if (seen.count(full)) throw ConfigError("duplicate key " + full + " (first on line " + std::to_string(seen[full]) + ")", line);
    seen[full] = line;
    try {
      if (full == "problem.operator") c.op = val;
      else if (full == "problem.interval") {
        const auto ab = infdim::detail::split(val, ',');
        if (ab.size() != 2) throw ConfigError("interval expects 'a,b'", line);
        c.interval = make_interval(detail::config_double(std::string(ab[0]), line),
                                   detail::config_double(std::string(ab[1]), line));
      } else if (full == "problem.datum") c.datum = val;
      else if (full == "problem.exact") c.exact = val;
      else if (full == "truncation.trial") c.trial = val;
      else if (full == "truncation.test") c.test = val;
      else if (full == "truncation.n_list") c.n_list = parse_n_list(val);
      else if (full == "truncation.solver") c.solver = val;
      else if (full == "truncation.tol") c.tol = detail::config_double(val, line);
      else if (full == "truncation.solution_family") c.solution_family = val;
      else if (full == "truncation.krylov_test") c.krylov_test = val;
      else if (full == "noise.preset") c.noise_preset = val;
      else if (full == "noise.sigma") c.sigma = val;
      else if (full == "noise.g") c.g = val;
      else if (full == "noise.nu") c.nu = val;
      else if (full == "output.csv") c.csv = val;
      else if (full == "output.track") {
        track_set = true;
        if (!val.empty())
          for (auto item : infdim::detail::split(val, ','))
            c.track.push_back(static_cast<long>(detail::config_double(detail::trim(item), line)));
      } else {
        throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
      }
    } catch (const ConfigError& e) {
      if (e.line() > 0) throw;
      throw ConfigError(e.what(), line);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what(), line);
    }
  }
  if (!track_set) c.track = default_tracked;
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

inline std::string print_config(const ExperimentConfig& c) {
  std::ostringstream o;
  auto kv = [&](const char* k, const std::string& v) {
    if (!v.empty()) o << k << " = " << v << '\n';
  };
  o << "[problem]\n";
  kv("operator", c.op);
  if (c.interval) o << "interval = " << format_number(c.interval->a) << ',' << format_number(c.interval->b) << '\n';
  kv("datum", c.datum);
  kv("exact", c.exact);
  o << "\n[truncation]\n";
  kv("trial", c.trial);
  kv("test", c.test);
  if (!c.n_list.empty()) o << "n_list = " << format_n_list(c.n_list) << '\n';
  kv("solver", c.solver);
  o << "tol = " << format_number(c.tol) << '\n';
  kv("solution_family", c.solution_family);
  kv("krylov_test", c.krylov_test);
  if (c.noise_mode()) {
    o << "\n[noise]\n";
    kv("preset", c.noise_preset);
    kv("sigma", c.sigma);
    kv("g", c.g);
    kv("nu", c.nu);
  }
  o << "\n[output]\n";
  kv("csv", c.csv);
  std::string track;
  for (long k : c.track) track += (track.empty() ? "" : ",") + std::to_string(k);
  o << "track = " << track << '\n';
  return o.str();
}

struct Preset {
  std::string name;
  std::string description;
  ExperimentConfig config;
};

inline const std::vector<Preset>& run_presets() {
  static const std::vector<Preset> presets = [] {
    std::vector<Preset> p;
    {
      ExperimentConfig c;
      c.op = "volterra";
      c.datum = "func:x2half";
      c.exact = "func:x";
      c.trial = "legendre";
      c.n_list = parse_n_list("2..100");
      c.csv = "volterra_g1.csv";
      p.push_back({"volterra-g1", "V f = x^2/2 on L2[0,1], exact f = x with ||f|| = 1/sqrt(3) = 0.5774", c});
    }
    {
      ExperimentConfig c;
      c.op = "mult-x:1,2";
      c.datum = "func:x2";
      c.exact = "func:x";
      c.trial = "krylov";
      c.solver = "gmres";
      c.n_list = parse_n_list("1..50");
      c.csv = "mult_g2.csv";
      p.push_back({"mult-g2", "x f = x^2 on L2[1,2], exact f = x with ||f|| = sqrt(7/3) = 1.5275", c});
    }
    for (const auto& [name, model] : noise_presets()) {
      ExperimentConfig c;
      c.op = "wshift:" + model.sigma.to_string();
      c.trial = "svd";
      c.noise_preset = name;
      c.n_list = parse_n_list("0..2000");
      c.csv = name + ".csv";
      const std::string nu = name == "noise-fig1" ? "0.4 n^-3/2" : "n^-3/2";
      p.push_back({name, "spectral noise: sigma_n = 1/n, g_n = 1/n^2, nu_n = " + nu, c});
    }
    return p;
  }();
  return presets;
}

inline const Preset* find_preset(std::string_view name) {
  for (const auto& p : run_presets())
    if (p.name == name) return &p;
  return nullptr;
}

}  // namespace infdim::cli
