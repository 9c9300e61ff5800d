// Copyright 2026 The cvlattice Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvlattice/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace cvlattice {

namespace {

using Array = std::vector<double>;
using Value = std::variant<bool, std::int64_t, double, std::string, Array>;

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.';
}

// Drops a trailing comment, ignoring '#' inside double-quoted strings.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string && c == '\\') {
      ++i;
    } else if (c == '"') {
      in_string = !in_string;
    } else if (c == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

// ---------------------------------------------------------------------------
// Values

bool parse_number(std::string_view s, Value& out) {
  std::string token(s);
  token.erase(std::remove(token.begin(), token.end(), '_'), token.end());
  if (token.empty()) return false;
  std::string_view body = token;
  bool negative = false;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body == "inf") {
    out = negative ? -std::numeric_limits<double>::infinity()
                   : std::numeric_limits<double>::infinity();
    return true;
  }
  if (body == "nan") return false;
  if (body.find_first_of(".eE") == std::string_view::npos) {
    std::int64_t v = 0;
    const char* first = token.data() + (token.front() == '+' ? 1 : 0);
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return false;
    out = v;
    return true;
  }
  double v = 0.0;
  const char* first = token.data() + (token.front() == '+' ? 1 : 0);
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return false;
  out = v;
  return true;
}

std::string parse_string(std::string_view s, const std::string& where) {
  // s includes the surrounding quotes.
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c == '"') fail(where + ": unexpected quote inside string");
    if (c == '\\') {
      if (i + 2 >= s.size()) fail(where + ": dangling escape");
      c = s[++i];
      switch (c) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(where + ": unsupported escape \\" + std::string(1, c));
      }
      continue;
    }
    out += c;
  }
  return out;
}

Value parse_value(std::string_view raw, const std::string& where) {
  const std::string_view s = trim(raw);
  if (s.empty()) fail(where + ": missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') fail(where + ": unterminated string");
    return parse_string(s, where);
  }
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.front() == '[') {
    if (s.back() != ']') fail(where + ": unterminated array");
    Array out;
    std::string_view body = trim(s.substr(1, s.size() - 2));
    while (!body.empty()) {
      const std::size_t comma = body.find(',');
      const std::string_view item = trim(body.substr(0, comma));
      if (item.empty()) {
        if (comma == std::string_view::npos) break;  // trailing comma
        fail(where + ": empty array element");
      }
      Value v;
      if (!parse_number(item, v)) {
        fail(where + ": arrays may only hold numbers, got '" +
             std::string(item) + "'");
      }
      out.push_back(std::holds_alternative<std::int64_t>(v)
                        ? static_cast<double>(std::get<std::int64_t>(v))
                        : std::get<double>(v));
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
    }
    return out;
  }
  Value v;
  if (!parse_number(s, v)) {
    fail(where + ": cannot parse value '" + std::string(s) + "'");
  }
  return v;
}

double as_double(const Value& v, const std::string& key) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) {
    return static_cast<double>(*i);
  }
  fail("key '" + key + "' expects a number");
}

std::int64_t as_integer(const Value& v, const std::string& key) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  fail("key '" + key + "' expects an integer");
}

int as_int(const Value& v, const std::string& key) {
  const std::int64_t i = as_integer(v, key);
  if (i < std::numeric_limits<int>::min() ||
      i > std::numeric_limits<int>::max()) {
    fail("key '" + key + "' is out of range");
  }
  return static_cast<int>(i);
}

bool as_bool(const Value& v, const std::string& key) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  fail("key '" + key + "' expects true or false");
}

const std::string& as_string(const Value& v, const std::string& key) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  fail("key '" + key + "' expects a string");
}

Array as_array(const Value& v, const std::string& key) {
  if (const auto* a = std::get_if<Array>(&v)) return *a;
  fail("key '" + key + "' expects an array of numbers");
}

// ---------------------------------------------------------------------------
// Schema

using Setter = std::function<void(ExperimentConfig&, const Value&,
                                  const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         if (parse_experiment(as_string(v, k)) != c.experiment) {
           fail("config is for experiment '" + as_string(v, k) +
                "' but '" + std::string(experiment_name(c.experiment)) +
                "' was requested");
         }
       }},
      {"output_dir",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.output_dir = as_string(v, k);
       }},
      {"seed",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         const std::int64_t s = as_integer(v, k);
         if (s < 0) fail("seed must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"threads",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.threads = as_int(v, k);
       }},
      {"write_psi",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.write_psi = as_bool(v, k);
       }},
      {"n_sites",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.params.n_sites = as_int(v, k);
       }},
      {"spacing",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.params.spacing = as_double(v, k);
       }},
      {"mass",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.params.mass = as_double(v, k);
       }},
      {"coupling",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.params.coupling = as_double(v, k);
       }},
      {"dt",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.params.dt = as_double(v, k);
       }},
      {"total_time",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.params.total_time = as_double(v, k);
       }},
      {"record_stride",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.params.record_stride = as_int(v, k);
       }},
      {"grid.m_points",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.params.grid.m_points = as_int(v, k);
       }},
      {"grid.extent",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.params.grid.extent = as_double(v, k);
       }},
      {"grid.l_trunc",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.params.grid.l_trunc = as_int(v, k);
       }},
      {"single_qumode.epsilon",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.single_qumode.epsilon = as_double(v, k);
       }},
      {"single_qumode.displacement",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.single_qumode.displacement = as_double(v, k);
       }},
      {"single_qumode.times",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.single_qumode.times = as_array(v, k);
       }},
      {"propagator.site",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.propagator.site = as_int(v, k);
       }},
      {"propagator.amplitude",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.propagator.amplitude = as_double(v, k);
       }},
      {"propagator.band",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.propagator.band = as_double(v, k);
       }},
      {"propagator.exclude",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.propagator.exclude = as_double(v, k);
       }},
      {"scattering.speed_window",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.scattering.speed_window = as_double(v, k);
       }},
      {"scattering.center_halfwidth",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.scattering.center_halfwidth = as_int(v, k);
       }},
      {"degenerate.displacement",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.degenerate.displacement = as_double(v, k);
       }},
      {"oracle.fock_cutoff",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.oracle.fock_cutoff = as_int(v, k);
       }},
      {"oracle.site",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.oracle.site = as_int(v, k);
       }},
      {"oracle.displacement",
       [](ExperimentConfig& c, const Value& v, const std::string& k) {
         c.oracle.displacement = as_double(v, k);
       }},
  };
  return table;
}

void set_wavepacket_field(WavepacketSpec& w, std::string_view field,
                          const Value& v, const std::string& key) {
  if (field == "center") {
    w.center = as_double(v, key);
  } else if (field == "momentum") {
    w.momentum = as_double(v, key);
  } else if (field == "width") {
    w.width = as_double(v, key);
  } else if (field == "amplitude") {
    w.amplitude = as_double(v, key);
  } else {
    fail("unknown key '" + key + "'");
  }
}

// Keys of the form wavepacket.<index>.<field>; index == size appends.
bool assign_wavepacket(ExperimentConfig& c, const std::string& key,
                       const Value& v) {
  constexpr std::string_view prefix = "wavepacket.";
  if (key.rfind(prefix, 0) != 0) return false;
  const std::string rest = key.substr(prefix.size());
  const std::size_t dot = rest.find('.');
  if (dot == std::string::npos) fail("unknown key '" + key + "'");
  std::size_t index = 0;
  const auto [ptr, ec] =
      std::from_chars(rest.data(), rest.data() + dot, index);
  if (ec != std::errc() || ptr != rest.data() + dot) {
    fail("bad wavepacket index in '" + key + "'");
  }
  if (index > c.wavepackets.size()) {
    fail("wavepacket index " + std::to_string(index) +
         " skips entries (have " + std::to_string(c.wavepackets.size()) + ")");
  }
  if (index == c.wavepackets.size()) c.wavepackets.emplace_back();
  set_wavepacket_field(c.wavepackets[index], rest.substr(dot + 1), v, key);
  return true;
}

void assign(ExperimentConfig& c, const std::string& key, const Value& v) {
  if (assign_wavepacket(c, key, v)) return;
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) fail("unknown key '" + key + "'");
  it->second(c, v, key);
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  std::string s = buf;
  // Keep a float marker so integers-valued doubles read back as floats.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::kSingleQumode: return "single-qumode";
    case Experiment::kPropagator: return "propagator";
    case Experiment::kScattering: return "scattering";
    case Experiment::kDegenerateCheck: return "degenerate-check";
    case Experiment::kOracleCompare: return "oracle-compare";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (const Experiment e :
       {Experiment::kSingleQumode, Experiment::kPropagator,
        Experiment::kScattering, Experiment::kDegenerateCheck,
        Experiment::kOracleCompare}) {
    if (experiment_name(e) == name) return e;
  }
  fail("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.output_dir = "out/" + std::string(experiment_name(e));
  SimulationParams& p = c.params;
  switch (e) {
    case Experiment::kSingleQumode:
      // Lattice fields are unused; one qumode with the test potential.
      p.n_sites = 2;
      p.spacing = std::numeric_limits<double>::infinity();
      p.total_time = 400.0;
      break;
    case Experiment::kPropagator:
      p.n_sites = 200;
      p.total_time = 80.0;
      p.record_stride = 10;
      break;
    case Experiment::kScattering: {
      p.n_sites = 250;
      p.coupling = 0.2;
      p.total_time = 175.0;
      p.record_stride = 10;
      WavepacketSpec left;
      left.center = 75.0;
      left.momentum = 0.3;
      left.width = 0.09;
      WavepacketSpec right = left;
      right.center = 175.0;
      right.momentum = -0.3;
      c.wavepackets = {left, right};
      break;
    }
    case Experiment::kDegenerateCheck:
      p.n_sites = 32;
      p.coupling = 0.8;
      p.total_time = 100.0;
      break;
    case Experiment::kOracleCompare:
      p.n_sites = 2;
      p.total_time = 1.0;
      p.record_stride = 10;
      break;
  }
  return c;
}

ExperimentConfig parse_config(std::string_view text, Experiment e) {
  ExperimentConfig c = default_config(e);
  std::set<std::string> seen;
  std::string prefix;
  bool wavepackets_reset = false;
  std::istringstream in{std::string(text)};
  std::string line_buf;
  int line_no = 0;
  while (std::getline(in, line_buf)) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    const std::string_view line = trim(strip_comment(line_buf));
    if (line.empty()) continue;
    if (line.rfind("[[", 0) == 0) {
      if (line.size() < 4 || line.substr(line.size() - 2) != "]]") {
        fail(where + ": malformed array-of-tables header");
      }
      const std::string name(trim(line.substr(2, line.size() - 4)));
      if (name != "wavepacket") {
        fail(where + ": unknown array of tables '" + name + "'");
      }
      if (!wavepackets_reset) {
        c.wavepackets.clear();
        wavepackets_reset = true;
      }
      c.wavepackets.emplace_back();
      prefix = "wavepacket." + std::to_string(c.wavepackets.size() - 1) + ".";
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') fail(where + ": malformed table header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (name.empty() ||
          !std::all_of(name.begin(), name.end(), is_key_char)) {
        fail(where + ": bad table name '" + name + "'");
      }
      if (!seen.insert("[" + name + "]").second) {
        fail(where + ": table [" + name + "] defined twice");
      }
      prefix = name + ".";
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(where + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty() || !std::all_of(key.begin(), key.end(), is_key_char)) {
      fail(where + ": bad key '" + std::string(key) + "'");
    }
    const std::string full = prefix + std::string(key);
    if (!seen.insert(full).second) {
      fail(where + ": key '" + full + "' defined twice");
    }
    try {
      assign(c, full, parse_value(line.substr(eq + 1), where));
    } catch (const ConfigError& err) {
      const std::string msg = err.what();
      if (msg.rfind("line ", 0) == 0) throw;
      fail(where + ": " + msg);
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, Experiment e) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str(), e);
  } catch (const ConfigError& err) {
    fail(path + ": " + err.what());
  }
}

void apply_override(ExperimentConfig& config, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    fail("override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string key(trim(assignment.substr(0, eq)));
  if (key.empty() || !std::all_of(key.begin(), key.end(), is_key_char)) {
    fail("override has a bad key '" + key + "'");
  }
  std::string_view raw = trim(assignment.substr(eq + 1));
  Value v;
  // Shells eat quotes, so a bare word is accepted for string-valued keys.
  if (!raw.empty() && raw.front() != '"' && raw.front() != '[' &&
      raw != "true" && raw != "false" && !parse_number(raw, v)) {
    v = std::string(raw);
  } else {
    v = parse_value(raw, "override '" + key + "'");
  }
  assign(config, key, v);
}

void validate_config(const ExperimentConfig& c) {
  try {
    c.params.validate();
  } catch (const std::invalid_argument& err) {
    fail(err.what());
  }
  if (c.threads < 0) fail("threads must be >= 0");
  if (c.output_dir.empty()) fail("output_dir must not be empty");
  for (std::size_t i = 0; i < c.wavepackets.size(); ++i) {
    const WavepacketSpec& w = c.wavepackets[i];
    if (!(w.width > 0.0) || !std::isfinite(w.width)) {
      fail("wavepacket " + std::to_string(i) + ": width must be positive");
    }
    if (!std::isfinite(w.center) || !std::isfinite(w.momentum) ||
        !std::isfinite(w.amplitude)) {
      fail("wavepacket " + std::to_string(i) + ": non-finite field");
    }
  }
  const int n = c.params.n_sites;
  switch (c.experiment) {
    case Experiment::kSingleQumode: {
      if (c.single_qumode.times.empty()) fail("single_qumode.times is empty");
      for (const double t : c.single_qumode.times) {
        if (!(t >= 0.0) || t > c.params.total_time * (1 + 1e-12)) {
          fail("single_qumode.times must lie in [0, total_time]");
        }
        const double steps = t / c.params.dt;
        if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps)) {
          fail("single_qumode.times must be multiples of dt");
        }
      }
      break;
    }
    case Experiment::kPropagator:
      if (c.propagator.site < -1 || c.propagator.site >= n) {
        fail("propagator.site out of range");
      }
      if (!(c.propagator.band >= 0.0) || !(c.propagator.exclude >= 0.0)) {
        fail("propagator.band and propagator.exclude must be >= 0");
      }
      if (!std::isfinite(c.params.spacing)) {
        fail("propagator needs a finite spacing");
      }
      break;
    case Experiment::kScattering:
      if (c.wavepackets.size() != 2) {
        fail("scattering needs exactly two [[wavepacket]] entries");
      }
      if (!(c.scattering.speed_window > 0.0 &&
            c.scattering.speed_window <= 1.0)) {
        fail("scattering.speed_window must lie in (0, 1]");
      }
      if (c.scattering.center_halfwidth < 0) {
        fail("scattering.center_halfwidth must be >= 0");
      }
      if (!std::isfinite(c.params.spacing)) {
        fail("scattering needs a finite spacing");
      }
      break;
    case Experiment::kDegenerateCheck:
      break;
    case Experiment::kOracleCompare:
      if (n > 3) fail("oracle-compare supports at most 3 sites");
      if (c.oracle.fock_cutoff < 1) fail("oracle.fock_cutoff must be >= 1");
      if (c.oracle.site < 0 || c.oracle.site >= n) {
        fail("oracle.site out of range");
      }
      break;
  }
}

std::string to_toml(const ExperimentConfig& c) {
  std::ostringstream out;
  const SimulationParams& p = c.params;
  out << "experiment = " << quote(std::string(experiment_name(c.experiment)))
      << "\n"
      << "output_dir = " << quote(c.output_dir) << "\n"
      << "seed = " << c.seed << "\n"
      << "threads = " << c.threads << "\n"
      << "write_psi = " << (c.write_psi ? "true" : "false") << "\n"
      << "n_sites = " << p.n_sites << "\n"
      << "spacing = " << format_double(p.spacing) << "\n"
      << "mass = " << format_double(p.mass) << "\n"
      << "coupling = " << format_double(p.coupling) << "\n"
      << "dt = " << format_double(p.dt) << "\n"
      << "total_time = " << format_double(p.total_time) << "\n"
      << "record_stride = " << p.record_stride << "\n"
      << "\n[grid]\n"
      << "m_points = " << p.grid.m_points << "\n"
      << "extent = " << format_double(p.grid.extent) << "\n"
      << "l_trunc = " << p.grid.l_trunc << "\n"
      << "\n[single_qumode]\n"
      << "epsilon = " << format_double(c.single_qumode.epsilon) << "\n"
      << "displacement = " << format_double(c.single_qumode.displacement)
      << "\n"
      << "times = [";
  for (std::size_t i = 0; i < c.single_qumode.times.size(); ++i) {
    out << (i ? ", " : "") << format_double(c.single_qumode.times[i]);
  }
  out << "]\n"
      << "\n[propagator]\n"
      << "site = " << c.propagator.site << "\n"
      << "amplitude = " << format_double(c.propagator.amplitude) << "\n"
      << "band = " << format_double(c.propagator.band) << "\n"
      << "exclude = " << format_double(c.propagator.exclude) << "\n"
      << "\n[scattering]\n"
      << "speed_window = " << format_double(c.scattering.speed_window) << "\n"
      << "center_halfwidth = " << c.scattering.center_halfwidth << "\n"
      << "\n[degenerate]\n"
      << "displacement = " << format_double(c.degenerate.displacement) << "\n"
      << "\n[oracle]\n"
      << "fock_cutoff = " << c.oracle.fock_cutoff << "\n"
      << "site = " << c.oracle.site << "\n"
      << "displacement = " << format_double(c.oracle.displacement) << "\n";
  for (const WavepacketSpec& w : c.wavepackets) {
    out << "\n[[wavepacket]]\n"
        << "center = " << format_double(w.center) << "\n"
        << "momentum = " << format_double(w.momentum) << "\n"
        << "width = " << format_double(w.width) << "\n"
        << "amplitude = " << format_double(w.amplitude) << "\n";
  }
  return out.str();
}

}  // namespace cvlattice
