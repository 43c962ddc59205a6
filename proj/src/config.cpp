#include "hartree/config.hpp"

#include "hartree/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace hartree {

bool RunConfig::operator==(const RunConfig& o) const {
  auto same_constants = [](const SixConstants& a, const SixConstants& b) {
    return a.C1 == b.C1 && a.C2 == b.C2 && a.C3 == b.C3 && a.eta == b.eta;
  };
  return model.n == o.model.n && model.gamma == o.model.gamma && model.coupling == o.model.coupling && N == o.N &&
         r_max == o.r_max && dt == o.dt && t_end == o.t_end && record_every == o.record_every &&
         initial == o.initial && same_constants(constants, o.constants) &&
         same_constants(pedagogical, o.pedagogical) && radii == o.radii && morawetz_R == o.morawetz_R &&
         morawetz_A == o.morawetz_A && strict_boundary == o.strict_boundary && output_dir == o.output_dir &&
         seed == o.seed;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view v, int line, std::string_view key) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out))
    throw ConfigError(line, std::string(key) + ": expected a finite number, got '" + std::string(v) + "'");
  return out;
}

long long to_integer(std::string_view v, int line, std::string_view key) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(line, std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view v, int line, std::string_view key) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(line, std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

std::string to_string_value(std::string_view v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  return std::string(v);
}

void require(bool ok, int line, const std::string& what) {
  if (!ok) throw ConfigError(line, what);
}

std::string number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, int> seen;  // key -> line
  bool have_C1 = false, have_C3 = false;

  using Setter = std::function<void(std::string_view, int)>;
  const std::map<std::string, Setter, std::less<>> setters{
      {"model.n", [&](auto v, int l) {
         const auto n = to_integer(v, l, "model.n");
         require(n >= 5 && n <= 64, l, "model.n must be an integer with 5 <= n <= 64");
         cfg.model.n = static_cast<int>(n);
       }},
      {"model.gamma", [&](auto v, int l) { cfg.model.gamma = to_double(v, l, "model.gamma"); }},
      {"model.coupling", [&](auto v, int l) { cfg.model.coupling = to_double(v, l, "model.coupling"); }},
      {"grid.N", [&](auto v, int l) {
         const auto N = to_integer(v, l, "grid.N");
         require(N >= 16 && N <= 8192, l, "grid.N must lie in [16, 8192]");
         cfg.N = static_cast<int>(N);
       }},
      {"grid.r_max", [&](auto v, int l) {
         cfg.r_max = to_double(v, l, "grid.r_max");
         require(cfg.r_max > 0.0, l, "grid.r_max must be positive");
       }},
      {"time.dt", [&](auto v, int l) {
         cfg.dt = to_double(v, l, "time.dt");
         require(cfg.dt > 0.0, l, "time.dt must be positive");
       }},
      {"time.t_end", [&](auto v, int l) {
         cfg.t_end = to_double(v, l, "time.t_end");
         require(cfg.t_end > 0.0, l, "time.t_end must be positive");
       }},
      {"time.record_every", [&](auto v, int l) {
         const auto r = to_integer(v, l, "time.record_every");
         require(r >= 1 && r <= 1000000, l, "time.record_every must be a positive integer");
         cfg.record_every = static_cast<int>(r);
       }},
      {"initial.profile", [&](auto v, int l) {
         cfg.initial.profile = to_string_value(v);
         const auto& p = cfg.initial.profile;
         require(p == "gaussian" || p == "bump" || p == "table", l,
                 "initial.profile must be gaussian, bump or table");
       }},
      {"initial.amplitude", [&](auto v, int l) { cfg.initial.amplitude = to_double(v, l, "initial.amplitude"); }},
      {"initial.width", [&](auto v, int l) {
         cfg.initial.width = to_double(v, l, "initial.width");
         require(cfg.initial.width > 0.0, l, "initial.width must be positive");
       }},
      {"initial.table", [&](auto v, int) { cfg.initial.table = to_string_value(v); }},
      {"constants.eta", [&](auto v, int l) {
         cfg.constants.eta = to_double(v, l, "constants.eta");
         require(cfg.constants.eta > 0.0 && cfg.constants.eta < 1.0, l, "constants.eta must lie in (0, 1)");
       }},
      {"constants.C1", [&](auto v, int l) {
         const auto c = to_integer(v, l, "constants.C1");
         require(c >= 1 && c <= 100000, l, "constants.C1 must be a positive integer");
         cfg.constants.C1 = static_cast<int>(c);
         have_C1 = true;
       }},
      {"constants.C2", [&](auto v, int l) {
         const auto c = to_integer(v, l, "constants.C2");
         require(c >= 1 && c <= 100000, l, "constants.C2 must be a positive integer");
         cfg.constants.C2 = static_cast<int>(c);
       }},
      {"constants.C3", [&](auto v, int l) {
         const auto c = to_integer(v, l, "constants.C3");
         require(c >= 1 && c <= 100000, l, "constants.C3 must be a positive integer");
         cfg.constants.C3 = static_cast<int>(c);
         have_C3 = true;
       }},
      {"constants.pedagogical_C1", [&](auto v, int l) {
         const auto c = to_integer(v, l, "constants.pedagogical_C1");
         require(c >= 1 && c <= 100000, l, "constants.pedagogical_C1 must be a positive integer");
         cfg.pedagogical.C1 = static_cast<int>(c);
       }},
      {"constants.pedagogical_C3", [&](auto v, int l) {
         const auto c = to_integer(v, l, "constants.pedagogical_C3");
         require(c >= 1 && c <= 100000, l, "constants.pedagogical_C3 must be a positive integer");
         cfg.pedagogical.C3 = static_cast<int>(c);
       }},
      {"diagnostics.radii", [&](auto v, int l) {
         cfg.radii.clear();
         std::string_view rest = v;
         while (!rest.empty()) {
           const auto comma = rest.find(',');
           const auto item = trim(rest.substr(0, comma));
           if (!item.empty()) {
             const double r = to_double(item, l, "diagnostics.radii");
             require(r > 0.0, l, "diagnostics.radii entries must be positive");
             cfg.radii.push_back(r);
           }
           rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
         }
       }},
      {"diagnostics.morawetz_R", [&](auto v, int l) {
         cfg.morawetz_R = to_double(v, l, "diagnostics.morawetz_R");
         require(cfg.morawetz_R > 0.0, l, "diagnostics.morawetz_R must be positive");
       }},
      {"diagnostics.morawetz_A", [&](auto v, int l) {
         cfg.morawetz_A = to_double(v, l, "diagnostics.morawetz_A");
         require(cfg.morawetz_A >= 1.0, l, "diagnostics.morawetz_A must be at least 1");
       }},
      {"diagnostics.strict_boundary",
       [&](auto v, int l) { cfg.strict_boundary = to_bool(v, l, "diagnostics.strict_boundary"); }},
      {"output.dir", [&](auto v, int l) {
         cfg.output_dir = to_string_value(v);
         require(!cfg.output_dir.empty(), l, "output.dir must not be empty");
       }},
      {"seed", [&](auto v, int l) {
         const auto s = to_integer(v, l, "seed");
         require(s >= 0, l, "seed must be nonnegative");
         cfg.seed = static_cast<std::uint64_t>(s);
       }},
  };

  cfg.pedagogical.C1 = 2;
  cfg.pedagogical.C3 = 3;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(line_no, "unknown key '" + std::string(key) + "'");
    if (value.empty()) throw ConfigError(line_no, "missing value for '" + std::string(key) + "'");
    if (const auto prev = seen.find(std::string(key)); prev != seen.end())
      throw ConfigError(line_no, "duplicate key '" + std::string(key) + "' (first set on line " +
                                     std::to_string(prev->second) + ")");
    seen.emplace(std::string(key), line_no);
    it->second(value, line_no);
  }

  const int end_line = line_no + 1;
  for (const char* key : {"model.n", "grid.N", "grid.r_max", "time.dt", "time.t_end"})
    if (!seen.count(key)) throw ConfigError(end_line, std::string("missing required key '") + key + "'");

  auto line_of = [&](const char* key) {
    const auto it = seen.find(key);
    return it == seen.end() ? end_line : it->second;
  };
  const int n = cfg.model.n;
  if (!(cfg.model.gamma > 0.0 && cfg.model.gamma < n)) {
    std::ostringstream msg;
    msg << "model.gamma = " << cfg.model.gamma << " is out of range: need 0 < gamma < n = " << n;
    throw ConfigError(line_of("model.gamma"), msg.str());
  }
  const double steps = cfg.t_end / cfg.dt;
  if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps) || std::round(steps) < 1.0)
    throw ConfigError(line_of("time.t_end"), "time.t_end must be a positive whole number of time.dt steps");
  if (static_cast<long long>(std::llround(steps)) % cfg.record_every != 0)
    throw ConfigError(line_of("time.record_every"), "time.t_end must be a whole number of record intervals");
  if (cfg.initial.profile == "table" && cfg.initial.table.empty())
    throw ConfigError(line_of("initial.profile"), "initial.profile = table needs initial.table");
  if (!have_C1) cfg.constants.C1 = 6 * n;
  if (!have_C3) cfg.constants.C3 = 18 * n;
  cfg.pedagogical.C2 = cfg.constants.C2;
  cfg.pedagogical.eta = cfg.constants.eta;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  out << "# effective configuration\n";
  out << "model.n = " << c.model.n << "\n";
  out << "model.gamma = " << number(c.model.gamma) << "\n";
  out << "model.coupling = " << number(c.model.coupling) << "\n";
  out << "grid.N = " << c.N << "\n";
  out << "grid.r_max = " << number(c.r_max) << "\n";
  out << "time.dt = " << number(c.dt) << "\n";
  out << "time.t_end = " << number(c.t_end) << "\n";
  out << "time.record_every = " << c.record_every << "\n";
  out << "initial.profile = " << c.initial.profile << "\n";
  out << "initial.amplitude = " << number(c.initial.amplitude) << "\n";
  out << "initial.width = " << number(c.initial.width) << "\n";
  if (!c.initial.table.empty()) out << "initial.table = \"" << c.initial.table << "\"\n";
  out << "constants.eta = " << number(c.constants.eta) << "\n";
  out << "constants.C1 = " << c.constants.C1 << "\n";
  out << "constants.C2 = " << c.constants.C2 << "\n";
  out << "constants.C3 = " << c.constants.C3 << "\n";
  out << "constants.pedagogical_C1 = " << c.pedagogical.C1 << "\n";
  out << "constants.pedagogical_C3 = " << c.pedagogical.C3 << "\n";
  out << "diagnostics.radii = ";
  for (std::size_t i = 0; i < c.radii.size(); ++i) out << (i ? ", " : "") << number(c.radii[i]);
  out << "\n";
  out << "diagnostics.morawetz_R = " << number(c.morawetz_R) << "\n";
  out << "diagnostics.morawetz_A = " << number(c.morawetz_A) << "\n";
  out << "diagnostics.strict_boundary = " << (c.strict_boundary ? "true" : "false") << "\n";
  out << "output.dir = \"" << c.output_dir << "\"\n";
  out << "seed = " << c.seed << "\n";
  return out.str();
}

namespace {

struct ProfileTable {
  std::vector<double> r;
  std::vector<Complex> value;

  Complex operator()(double x) const {
    if (x <= r.front()) return value.front();
    if (x >= r.back()) return {0.0, 0.0};
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    const auto k = static_cast<std::size_t>(std::distance(r.begin(), it)) - 1;
    const double f = (x - r[k]) / (r[k + 1] - r[k]);
    return value[k] + f * (value[k + 1] - value[k]);
  }
};

ProfileTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open initial.table '" + path + "'");
  ProfileTable t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double r = 0.0, re = 0.0, im = 0.0;
    if (!(fields >> r)) continue;
    if (!(fields >> re)) throw FormatError(path + ":" + std::to_string(line_no) + ": expected 'r re [im]'");
    fields >> im;
    if (!t.r.empty() && !(r > t.r.back()))
      throw FormatError(path + ":" + std::to_string(line_no) + ": radii must increase strictly");
    t.r.push_back(r);
    t.value.emplace_back(re, im);
  }
  if (t.r.size() < 2) throw FormatError(path + ": table needs at least two rows");
  return t;
}

}  // namespace

FieldState make_initial_state(const RunConfig& config, const GridPtr& grid) {
  const double A = config.initial.amplitude;
  const double w = config.initial.width;
  if (config.initial.profile == "gaussian")
    return FieldState::from_profile(grid, [&](double r) { return Complex(A * std::exp(-(r * r) / (w * w)), 0.0); });
  if (config.initial.profile == "bump")
    return FieldState::from_profile(grid, [&](double r) {
      const double s = r / w;
      return s < 1.0 ? Complex(A * std::exp(1.0 - 1.0 / (1.0 - s * s)), 0.0) : Complex(0.0, 0.0);
    });
  const auto table = load_table(config.initial.table);
  return FieldState::from_profile(grid, [&](double r) { return A * table(r); });
}

}  // namespace hartree
