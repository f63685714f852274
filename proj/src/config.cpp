// Copyright 2026 The ddmag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ddmag/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ddmag {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Splits "1.6uG" into the number and the suffix.
std::pair<double, std::string_view> number_with_suffix(std::string_view v) {
  v = trim(v);
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || !std::isfinite(x)) {
    throw ConfigError("not a number: '" + std::string(v) + "'");
  }
  return {x, trim(std::string_view(res.ptr, static_cast<std::size_t>(v.data() + v.size() - res.ptr)))};
}

double parse_number(std::string_view v) {
  const auto [x, unit] = number_with_suffix(v);
  if (!unit.empty()) throw ConfigError("unexpected unit '" + std::string(unit) + "'");
  return x;
}

long long parse_integer(std::string_view v) {
  v = trim(v);
  long long x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("not an integer: '" + std::string(v) + "'");
  }
  return x;
}

bool parse_bool(std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError("not a boolean: '" + std::string(v) + "'");
}

Vec3 parse_direction(std::string_view v) {
  v = trim(v);
  static const std::map<std::string_view, Vec3> named{
      {"+x", {1, 0, 0}}, {"x", {1, 0, 0}},  {"-x", {-1, 0, 0}}, {"+y", {0, 1, 0}},
      {"y", {0, 1, 0}},  {"-y", {0, -1, 0}}, {"+z", {0, 0, 1}},  {"z", {0, 0, 1}},
      {"-z", {0, 0, -1}}};
  if (auto it = named.find(v); it != named.end()) return it->second;
  double c[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const auto comma = v.find(',', pos);
    if ((i < 2) != (comma != std::string_view::npos)) {
      throw ConfigError("direction must be +x/-x/.. or 'x,y,z'");
    }
    c[i] = parse_number(v.substr(pos, i < 2 ? comma - pos : std::string_view::npos));
    pos = comma + 1;
  }
  const Vec3 d{c[0], c[1], c[2]};
  if (!(d.norm() > 0.0)) throw ConfigError("direction must be non-zero");
  return d;
}

template <class E>
E parse_enum(std::string_view v, const std::map<std::string_view, E>& table, const char* what) {
  v = trim(v);
  if (auto it = table.find(v); it != table.end()) return it->second;
  std::string msg = std::string("unknown ") + what + " '" + std::string(v) + "'; expected one of";
  for (const auto& [k, _] : table) msg += " " + std::string(k);
  throw ConfigError(msg);
}

}  // namespace

double parse_field(std::string_view v) {
  const auto [x, unit] = number_with_suffix(v);
  static const std::map<std::string_view, double> scale{
      {"", 1.0}, {"G", 1.0}, {"mG", 1e-3}, {"uG", 1e-6}, {"\xC2\xB5G", 1e-6}, {"\xCE\xBCG", 1e-6},
      {"nG", 1e-9}};
  auto it = scale.find(unit);
  if (it == scale.end()) throw ConfigError("unknown field unit '" + std::string(unit) + "'");
  return x * it->second;
}

double parse_time(std::string_view v) {
  const auto [x, unit] = number_with_suffix(v);
  static const std::map<std::string_view, double> scale{
      {"", 1.0}, {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"\xC2\xB5s", 1e-6}, {"\xCE\xBCs", 1e-6},
      {"ns", 1e-9}};
  auto it = scale.find(unit);
  if (it == scale.end()) throw ConfigError("unknown time unit '" + std::string(unit) + "'");
  return x * it->second;
}

double RunConfig::resolved_tau() const {
  if (tau) return *tau;
  return magic_tau(field, magic_m);
}

Schedule RunConfig::schedule() const {
  if (sequence == SequenceKind::Fid && duration) {
    const int spq = samples_per_quarter;
    const int n = std::max(1, n_cycles) * 4 * spq;
    std::vector<double> times(n);
    for (int k = 1; k <= n; ++k) times[k - 1] = *duration * k / n;
    return build_fid(*duration, times);
  }
  return build_schedule(sequence, resolved_tau(), n_cycles, samples_per_quarter);
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  bool have_b0 = false;
  bool have_j = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    auto fail = [&](const std::string& what) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + what);
    };
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view val = trim(line.substr(eq + 1));
    if (key.empty()) fail("missing key");
    if (!seen.insert(key).second) fail("duplicate key '" + key + "'");
    if (val.empty()) {
      if (key == "b0") fail("signal field required");
      fail("empty value for '" + key + "'");
    }
    try {
      if (key == "J" || key == "N") {
        if (have_j) fail("give either J or N, not both");
        have_j = true;
        cfg.j = parse_number(val);
      } else if (key == "gamma") {
        cfg.field.gamma = parse_number(val);
      } else if (key == "B0") {
        cfg.field.B0 = parse_field(val);
      } else if (key == "b0") {
        cfg.field.b0 = parse_field(val);
        have_b0 = true;
      } else if (key == "bc") {
        cfg.field.bc = parse_field(val);
      } else if (key == "c2p") {
        cfg.c2p = parse_number(val);
      } else if (key == "noise_model") {
        cfg.field.noise_model = parse_enum<NoiseModel>(
            val, {{"full3d", NoiseModel::Full3d}, {"dephasing", NoiseModel::Dephasing}}, "noise_model");
      } else if (key == "probe") {
        cfg.probe.kind = parse_enum<ProbeKind>(val, {{"css", ProbeKind::Css}, {"sss", ProbeKind::Sss}},
                                               "probe");
      } else if (key == "probe_direction") {
        cfg.probe.direction = parse_direction(val);
      } else if (key == "sss_twist") {
        cfg.probe.twist = parse_number(val);
      } else if (key == "sss_target_xi2") {
        cfg.probe.target_xi2 = parse_number(val);
      } else if (key == "sequence") {
        cfg.sequence = parse_enum<SequenceKind>(
            val,
            {{"fid", SequenceKind::Fid}, {"unidd", SequenceKind::UniDD}, {"buni", SequenceKind::BUniDD}},
            "sequence");
      } else if (key == "tau") {
        cfg.tau = parse_time(val);
      } else if (key == "magic_m") {
        cfg.magic_m = static_cast<int>(parse_integer(val));
      } else if (key == "n_cycles") {
        cfg.n_cycles = static_cast<int>(parse_integer(val));
      } else if (key == "duration") {
        cfg.duration = parse_time(val);
      } else if (key == "samples_per_quarter") {
        cfg.samples_per_quarter = static_cast<int>(parse_integer(val));
      } else if (key == "realizations") {
        const auto m = parse_integer(val);
        if (m < 1) fail("realizations must be >= 1");
        cfg.realizations = static_cast<std::size_t>(m);
      } else if (key == "seed") {
        const auto s = trim(val);
        std::uint64_t x = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("seed must be a u64");
        cfg.seed = x;
      } else if (key == "phase_mode") {
        cfg.phase_mode = parse_enum<PhaseMode>(val,
                                               {{"atan2_xy", PhaseMode::Atan2Xy},
                                                {"arcsin_jy", PhaseMode::ArcsinJy},
                                                {"sinusoid_fit", PhaseMode::SinusoidFit}},
                                               "phase_mode");
      } else if (key == "finite_shots") {
        cfg.finite_shots = parse_bool(val);
      } else if (key == "omega_interpretation") {
        cfg.omega = parse_enum<OmegaInterpretation>(
            val,
            {{"signal", OmegaInterpretation::Signal},
             {"bias_plus_signal", OmegaInterpretation::BiasPlusSignal}},
            "omega_interpretation");
      } else if (key == "slope_delta") {
        cfg.slope_delta = parse_number(val);
      } else if (key == "sweep_bc_min") {
        cfg.sweep_bc_min = parse_field(val);
      } else if (key == "sweep_bc_max") {
        cfg.sweep_bc_max = parse_field(val);
      } else if (key == "sweep_points_per_decade") {
        cfg.sweep_points_per_decade = static_cast<int>(parse_integer(val));
      } else if (key == "sweep_time") {
        cfg.sweep_time = parse_time(val);
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      if (what.rfind("line ", 0) == 0) throw;
      fail(key + ": " + what);
    }
  }

  if (!have_j) throw ConfigError("spin size required (J or N)");
  if (!have_b0) throw ConfigError("signal field required");
  const double twice = 2.0 * cfg.j;
  if (!(cfg.j >= 0.5) || twice != std::round(twice)) {
    throw ConfigError("J must be a positive integer or half-integer");
  }
  try {
    validate(cfg.field);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.tau && !(*cfg.tau > 0.0)) throw ConfigError("tau must be positive");
  if (cfg.duration && !(*cfg.duration > 0.0)) throw ConfigError("duration must be positive");
  if (cfg.duration && cfg.sequence != SequenceKind::Fid) {
    throw ConfigError("duration applies to the fid sequence only");
  }
  if (cfg.magic_m < 1) throw ConfigError("magic_m must be >= 1");
  if (cfg.n_cycles < 1) throw ConfigError("n_cycles must be >= 1");
  if (cfg.samples_per_quarter < 1) throw ConfigError("samples_per_quarter must be >= 1");
  if (!(cfg.slope_delta > 0.0)) throw ConfigError("slope_delta must be positive");
  if (!(cfg.sweep_bc_min > 0.0) || !(cfg.sweep_bc_max > cfg.sweep_bc_min)) {
    throw ConfigError("sweep range must satisfy 0 < sweep_bc_min < sweep_bc_max");
  }
  if (cfg.sweep_points_per_decade < 1) throw ConfigError("sweep_points_per_decade must be >= 1");
  if (!(cfg.sweep_time > 0.0)) throw ConfigError("sweep_time must be positive");
  if (!cfg.tau && cfg.field.B0 == 0.0 && !(cfg.sequence == SequenceKind::Fid && cfg.duration)) {
    throw ConfigError("tau is required when B0 = 0 (no magic condition)");
  }
  if (cfg.probe.kind == ProbeKind::Sss) {
    const Vec3 d = cfg.probe.direction;
    if (d.y != 0.0 || d.z != 0.0 || !(d.x > 0.0)) {
      throw ConfigError("squeezed probe is prepared along +x only");
    }
  }
  if (cfg.tau && cfg.sequence != SequenceKind::Fid) {
    for (auto& w : schedule_warnings(build_schedule(cfg.sequence, *cfg.tau, 1, 1), cfg.field)) {
      cfg.warnings.push_back(std::move(w));
    }
  } else {
    for (auto& w : field_warnings(cfg.field)) cfg.warnings.push_back(std::move(w));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ddmag
