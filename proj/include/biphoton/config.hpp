// Copyright 2026 The biphoton-cavity Authors
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

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "biphoton/cavity.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/grid.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/state.hpp"
#include "biphoton/units.hpp"

// Flat `key = value` simulation config with dotted keys. Wavelengths in nm,
// times in fs, couplings as ratios to the cavity rate gamma = 1 / lifetime.
namespace biphoton {

struct GridConfig {
  double center_nm = 685.0;
  double span_nm = 40.0;
  std::size_t points = 512;
};

struct PumpConfig {
  double center_down_nm = 685.0;
  double bandwidth_nm = 6.0;
  PumpBandwidthConvention convention = PumpBandwidthConvention::at_degeneracy;
};

struct CavityConfig {
  CavityKind kind = CavityKind::dicke;
  double center_nm = 685.0;
  double lifetime_fs = 150.0;
  double coupling_ratio = 1.0;
  double emitter_nm = 685.0;
  double emitter_damping_ratio = 0.0;
};

struct SimConfig {
  GridConfig grid;
  PumpConfig pump;
  PhaseMatching phase_matching;
  FilterSpec signal_filter;
  FilterSpec idler_filter;
  CavityConfig cavity;
  /// Keys that were not given and took their default value, in key order.
  std::vector<std::string> defaulted_keys;
};

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& key, std::size_t line, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
    throw ParseError(key, line, "expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

inline std::size_t parse_count(const std::string& key, std::size_t line, std::string_view text) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ParseError(key, line, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

struct ConfigKey {
  std::string name;
  std::function<void(SimConfig&, const std::string&, std::size_t, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

template <typename Member>
ConfigKey number_key(std::string name, Member member) {
  return {name,
          [member](SimConfig& c, const std::string& k, std::size_t line, std::string_view v) {
            std::invoke(member, c) = parse_double(k, line, v);
          },
          [member](const SimConfig& c) { return format_number(std::invoke(member, c)); }};
}

inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    k.push_back(number_key("grid.center_nm", [](auto& c) -> auto& { return c.grid.center_nm; }));
    k.push_back(number_key("grid.span_nm", [](auto& c) -> auto& { return c.grid.span_nm; }));
    k.push_back({"grid.points",
                 [](SimConfig& c, const std::string& key, std::size_t line, std::string_view v) {
                   c.grid.points = parse_count(key, line, v);
                 },
                 [](const SimConfig& c) { return std::to_string(c.grid.points); }});
    k.push_back(number_key("pump.center_down_nm", [](auto& c) -> auto& { return c.pump.center_down_nm; }));
    k.push_back(number_key("pump.bandwidth_nm", [](auto& c) -> auto& { return c.pump.bandwidth_nm; }));
    k.push_back({"pump.bandwidth_convention",
                 [](SimConfig& c, const std::string& key, std::size_t line, std::string_view v) {
                   if (v == "at_pump") c.pump.convention = PumpBandwidthConvention::at_pump;
                   else if (v == "at_degeneracy") c.pump.convention = PumpBandwidthConvention::at_degeneracy;
                   else throw ParseError(key, line, "expected at_pump or at_degeneracy");
                 },
                 [](const SimConfig& c) {
                   return std::string(c.pump.convention == PumpBandwidthConvention::at_pump ? "at_pump"
                                                                                          : "at_degeneracy");
                 }});
    k.push_back({"phase_matching.kind",
                 [](SimConfig& c, const std::string& key, std::size_t line, std::string_view v) {
                   if (v == "flat") c.phase_matching.kind = PhaseMatching::Kind::flat;
                   else if (v == "gaussian") c.phase_matching.kind = PhaseMatching::Kind::gaussian;
                   else throw ParseError(key, line, "expected flat or gaussian");
                 },
                 [](const SimConfig& c) {
                   return std::string(c.phase_matching.kind == PhaseMatching::Kind::flat ? "flat" : "gaussian");
                 }});
    k.push_back(number_key("phase_matching.width_nm", [](auto& c) -> auto& { return c.phase_matching.width_nm; }));
    k.push_back(number_key("filters.signal.center_nm", [](auto& c) -> auto& { return c.signal_filter.center_wavelength_nm; }));
    k.push_back(number_key("filters.signal.fwhm_nm", [](auto& c) -> auto& { return c.signal_filter.bandwidth_fwhm_nm; }));
    k.push_back(number_key("filters.idler.center_nm", [](auto& c) -> auto& { return c.idler_filter.center_wavelength_nm; }));
    k.push_back(number_key("filters.idler.fwhm_nm", [](auto& c) -> auto& { return c.idler_filter.bandwidth_fwhm_nm; }));
    k.push_back({"cavity.kind",
                 [](SimConfig& c, const std::string& key, std::size_t line, std::string_view v) {
                   if (v == "one_sided") c.cavity.kind = CavityKind::one_sided;
                   else if (v == "two_sided") c.cavity.kind = CavityKind::two_sided;
                   else if (v == "dicke") c.cavity.kind = CavityKind::dicke;
                   else throw ParseError(key, line, "expected one_sided, two_sided or dicke");
                 },
                 [](const SimConfig& c) { return std::string(to_string(c.cavity.kind)); }});
    k.push_back(number_key("cavity.center_nm", [](auto& c) -> auto& { return c.cavity.center_nm; }));
    k.push_back(number_key("cavity.lifetime_fs", [](auto& c) -> auto& { return c.cavity.lifetime_fs; }));
    k.push_back(number_key("cavity.coupling_ratio", [](auto& c) -> auto& { return c.cavity.coupling_ratio; }));
    k.push_back(number_key("cavity.emitter_nm", [](auto& c) -> auto& { return c.cavity.emitter_nm; }));
    k.push_back(number_key("cavity.emitter_damping_ratio", [](auto& c) -> auto& { return c.cavity.emitter_damping_ratio; }));
    return k;
  }();
  return keys;
}

inline const ConfigKey* find_key(std::string_view name) {
  for (const auto& k : config_keys())
    if (k.name == name) return &k;
  return nullptr;
}

}  // namespace detail

/// Range and consistency checks. `lines` maps keys to the line they were
/// read from so errors can point at them.
inline void validate(const SimConfig& c, const std::map<std::string, std::size_t>& lines = {}) {
  auto fail = [&](const std::string& key, const std::string& what) {
    const auto it = lines.find(key);
    throw ParseError(key, it == lines.end() ? 0 : it->second, what);
  };
  auto positive = [&](const std::string& key, double v) {
    if (!(v > 0.0)) fail(key, "must be positive, got " + detail::format_number(v));
  };
  positive("grid.center_nm", c.grid.center_nm);
  positive("grid.span_nm", c.grid.span_nm);
  if (c.grid.span_nm >= 2.0 * c.grid.center_nm) fail("grid.span_nm", "must be below twice grid.center_nm");
  if (c.grid.points < 2) fail("grid.points", "must be at least 2");
  positive("pump.center_down_nm", c.pump.center_down_nm);
  positive("pump.bandwidth_nm", c.pump.bandwidth_nm);
  if (c.pump.bandwidth_nm >= c.pump.center_down_nm / 2.0) {
    fail("pump.bandwidth_nm", "must be below the pump wavelength (half of pump.center_down_nm)");
  }
  if (c.phase_matching.kind == PhaseMatching::Kind::gaussian) {
    positive("phase_matching.width_nm", c.phase_matching.width_nm);
  }
  positive("filters.signal.center_nm", c.signal_filter.center_wavelength_nm);
  positive("filters.signal.fwhm_nm", c.signal_filter.bandwidth_fwhm_nm);
  positive("filters.idler.center_nm", c.idler_filter.center_wavelength_nm);
  positive("filters.idler.fwhm_nm", c.idler_filter.bandwidth_fwhm_nm);
  positive("cavity.center_nm", c.cavity.center_nm);
  positive("cavity.lifetime_fs", c.cavity.lifetime_fs);
  if (!(c.cavity.coupling_ratio >= 0.0)) {
    fail("cavity.coupling_ratio", "must be non-negative, got " + detail::format_number(c.cavity.coupling_ratio));
  }
  positive("cavity.emitter_nm", c.cavity.emitter_nm);
  if (!(c.cavity.emitter_damping_ratio >= 0.0)) {
    fail("cavity.emitter_damping_ratio", "must be non-negative");
  }
}

/// Parses config text. Every key is optional except phase_matching.width_nm
/// when the gaussian kind is selected; omitted keys are listed in
/// defaulted_keys.
inline SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("", line_no, "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const auto value = detail::trim(line.substr(eq + 1));
    const auto* spec = detail::find_key(key);
    if (spec == nullptr) throw ParseError(key, line_no, "unknown key");
    if (seen.contains(key)) throw ParseError(key, line_no, "duplicate key");
    if (value.empty()) throw ParseError(key, line_no, "missing value");
    spec->set(cfg, key, line_no, value);
    seen.emplace(key, line_no);
  }
  for (const auto& k : detail::config_keys()) {
    if (!seen.contains(k.name)) cfg.defaulted_keys.push_back(k.name);
  }
  if (cfg.phase_matching.kind == PhaseMatching::Kind::gaussian && !seen.contains("phase_matching.width_nm")) {
    throw ParseError("phase_matching.width_nm", seen.at("phase_matching.kind"),
                     "required when phase_matching.kind = gaussian");
  }
  validate(cfg, seen);
  return cfg;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Applies `key=value` on top of a parsed config (the key may omit the
/// `cavity.` prefix when `prefix` is "cavity.").
inline void apply_override(SimConfig& cfg, std::string_view assignment, std::string_view prefix = "") {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ParseError(std::string(assignment), 0, "override must be KEY=VALUE");
  std::string key(detail::trim(assignment.substr(0, eq)));
  if (!prefix.empty() && !key.starts_with(prefix)) key = std::string(prefix) + key;
  const auto value = detail::trim(assignment.substr(eq + 1));
  const auto* spec = detail::find_key(key);
  if (spec == nullptr) throw ParseError(key, 0, "unknown key");
  if (value.empty()) throw ParseError(key, 0, "missing value");
  spec->set(cfg, key, 0, value);
  std::erase(cfg.defaulted_keys, key);
  validate(cfg);
}

/// Canonical `key = value` lines, one per key, in a fixed order. Parsing the
/// echo reproduces the config exactly.
inline std::vector<std::string> config_echo(const SimConfig& cfg) {
  std::vector<std::string> out;
  for (const auto& k : detail::config_keys()) out.push_back(k.name + " = " + k.get(cfg));
  return out;
}

// Builders from a config to the simulation objects.

inline FrequencyGrid make_grid(const SimConfig& cfg) {
  return build_grid(cfg.grid.center_nm, cfg.grid.span_nm, cfg.grid.points);
}

inline PumpSpec make_pump(const SimConfig& cfg) {
  return {cfg.pump.center_down_nm, cfg.pump.bandwidth_nm, cfg.pump.convention};
}

inline BiphotonAmplitude make_input_state(const SimConfig& cfg, const FrequencyGrid& grid) {
  return compose_input_state(make_pump(cfg), cfg.phase_matching, cfg.signal_filter, cfg.idler_filter, grid);
}

inline CavityModel make_cavity(const SimConfig& cfg) {
  const auto& c = cfg.cavity;
  const double gamma = 1.0 / c.lifetime_fs;
  const double w0 = omega_from_wavelength(c.center_nm);
  switch (c.kind) {
    case CavityKind::one_sided: return CavityModel::one_sided(w0, gamma);
    case CavityKind::two_sided: return CavityModel::two_sided(w0, gamma);
    case CavityKind::dicke:
      return CavityModel::dicke(w0, gamma, c.coupling_ratio * gamma, omega_from_wavelength(c.emitter_nm),
                                c.emitter_damping_ratio * gamma);
  }
  throw UsageError("unknown cavity kind");
}

/// Input state, idler transfer curve and transformed state for one config.
struct PipelineRun {
  BiphotonAmplitude input;
  TransferCurve curve;
  BiphotonAmplitude output;
  double input_entropy = 0.0;
  double output_entropy = 0.0;

  double delta() const { return output_entropy - input_entropy; }
};

inline PipelineRun run_pipeline(const SimConfig& cfg) {
  const auto grid = make_grid(cfg);
  auto input = make_input_state(cfg, grid);
  auto curve = transfer(make_cavity(cfg), grid.idler());
  auto output = apply_idler_transfer(input, curve);
  const double s_in = entropy_of(input);
  const double s_out = entropy_of(output);
  return {std::move(input), std::move(curve), std::move(output), s_in, s_out};
}

}  // namespace biphoton
