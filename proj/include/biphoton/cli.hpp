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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "biphoton/config.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/io.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/sweep.hpp"

// Command-line surface: one subcommand per pipeline.
// Exit status 0 on success, 1 on usage/validation errors, 2 on I/O errors.
namespace biphoton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

inline constexpr const char* kOutDirEnv = "BIPHOTON_OUT_DIR";

struct Options {
  std::string config_path;
  std::string out_path;
  std::string in_path;
  std::string curve_out_path;
  std::vector<std::string> cavity_overrides;
  std::string format = "csv";
  std::string values;
  std::string series;
  std::size_t threads = 0;
  bool bits = false;
};

namespace detail {

inline std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = biphoton::detail::trim(item);
    double v = 0.0;
    if (!biphoton::detail::parse_number(std::string(t), v)) {
      throw UsageError(std::string("bad number '") + std::string(t) + "' in " + what);
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string(what) + " list is empty");
  return out;
}

inline std::filesystem::path resolve_out(const std::string& path) {
  std::filesystem::path p(path);
  if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0' && p.is_relative()) {
    return std::filesystem::path(dir) / p;
  }
  return p;
}

/// Sends data to --out when given, else to `out`.
inline void emit(const Options& opt, const std::string& content, std::ostream& out) {
  if (opt.out_path.empty()) {
    out << content;
  } else {
    write_file_atomic(resolve_out(opt.out_path), content);
  }
}

inline SimConfig load(const Options& opt) {
  auto cfg = load_config(opt.config_path);
  for (const auto& o : opt.cavity_overrides) apply_override(cfg, o, "cavity.");
  return cfg;
}

inline std::string metadata(const SimConfig& cfg) {
  std::string s;
  for (const auto& line : config_echo(cfg)) s += "# config: " + line + "\n";
  s += "# defaulted: " + biphoton::detail::join(cfg.defaulted_keys, ",", "none") + "\n";
  return s;
}

inline std::string entropy_line(const std::string& name, double nats, bool bits) {
  if (bits) return name + "_bits = " + biphoton::detail::num9(nats / std::numbers::ln2) + "\n";
  return name + "_nats = " + biphoton::detail::num9(nats) + "\n";
}

inline int cmd_state(const Options& opt, std::ostream& out) {
  const auto cfg = load(opt);
  emit(opt, format_jsi(make_input_state(cfg, make_grid(cfg)), cfg), out);
  return kExitOk;
}

inline int cmd_transmit(const Options& opt, std::ostream& out) {
  const auto cfg = load(opt);
  const auto grid = make_grid(cfg);
  const auto input = make_input_state(cfg, grid);
  const auto curve = transfer(make_cavity(cfg), grid.idler());
  const auto output = apply_idler_transfer(input, curve);
  const auto curve_text = format_curve(curve, cfg);
  if (!opt.curve_out_path.empty()) write_file_atomic(resolve_out(opt.curve_out_path), curve_text);
  emit(opt, format_jsi(output, cfg, curve.flags), out);
  return kExitOk;
}

inline int cmd_entropy(const Options& opt, std::ostream& out) {
  const auto cfg = load(opt);
  std::string text = metadata(cfg);
  if (!opt.in_path.empty()) {
    const auto m = ingest_measured_jsi(opt.in_path);
    const auto e = measured_entropy(m);
    text += "# source: " + opt.in_path + "\n";
    text += "# flags: " + biphoton::detail::join(e.flags, ",", "none") + "\n";
    text += entropy_line("entropy", e.spectrum.entropy, opt.bits);
    text += "schmidt_number = " + biphoton::detail::num9(e.spectrum.effective_modes) + "\n";
  } else {
    const auto run = run_pipeline(cfg);
    text += "# cavity: " + std::string(to_string(cfg.cavity.kind)) + "\n";
    text += "# flags: " + biphoton::detail::join(run.curve.flags, ",", "none") + "\n";
    text += entropy_line("entropy_input", run.input_entropy, opt.bits);
    text += entropy_line("entropy_output", run.output_entropy, opt.bits);
    text += entropy_line("entropy_delta", run.delta(), opt.bits);
  }
  emit(opt, text, out);
  return kExitOk;
}

inline int cmd_sweep(const Options& opt, SweepParameter which, std::ostream& out) {
  const auto cfg = load(opt);
  SweepPlan plan = which == SweepParameter::coupling_ratio      ? default_coupling_plan(cfg)
                   : which == SweepParameter::pump_bandwidth_nm ? default_pump_plan(cfg)
                                                                : default_detuning_plan(cfg);
  if (!opt.values.empty()) plan.values = parse_list(opt.values, "--values");
  if (opt.series == "none") {
    plan.series.reset();
  } else if (!opt.series.empty()) {
    plan.series->values = parse_list(opt.series, "--series");
  }
  plan.threads = opt.threads;
  const auto result = which == SweepParameter::coupling_ratio      ? run_coupling_sweep(plan)
                      : which == SweepParameter::pump_bandwidth_nm ? run_pump_bandwidth_sweep(plan)
                                                                   : run_detuning_sweep(plan);
  emit(opt, format_sweep(result, cfg), out);
  return kExitOk;
}

inline int cmd_ingest(const Options& opt, std::ostream& out) {
  const auto cfg = load(opt);
  const auto m = ingest_measured_jsi(opt.in_path);
  const auto e = measured_entropy(m);
  std::string text = metadata(cfg);
  text += "# source: " + opt.in_path + "\n";
  text += "# flags: " + biphoton::detail::join(e.flags, ",", "none") + "\n";
  text += "signal_points = " + std::to_string(m.signal_nm.size()) + "\n";
  text += "idler_points = " + std::to_string(m.idler_nm.size()) + "\n";
  text += entropy_line("entropy", e.spectrum.entropy, opt.bits);
  text += "schmidt_number = " + biphoton::detail::num9(e.spectrum.effective_modes) + "\n";
  emit(opt, text, out);
  return kExitOk;
}

}  // namespace detail

/// Parses argv and runs the selected pipeline. Data goes to `out` (or the
/// --out file), diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Biphoton joint-spectrum and entanglement simulator for idler propagation through microcavities",
               "biphoton"};
  app.require_subcommand(1);
  app.footer(std::string("Environment: ") + kOutDirEnv +
             " - directory that relative --out/--curve-out paths are resolved against.");
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Simulation config file (key = value)")->required();
    sub->add_option("--out", opt.out_path, "Output file (default: standard output)");
    sub->add_option("--cavity-override", opt.cavity_overrides, "Override a cavity key, e.g. kind=two_sided")
        ->take_all();
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv"}));
  };

  auto* state = app.add_subcommand("state", "Write the input joint spectrum (jsiv1)");
  common(state);
  auto* transmit = app.add_subcommand("transmit", "Write the joint spectrum after the idler cavity (jsiv1)");
  common(transmit);
  transmit->add_option("--curve-out", opt.curve_out_path, "Also write the transfer curve (curvev1)");
  auto* entropy = app.add_subcommand("entropy", "Print input/output entanglement entropy");
  common(entropy);
  entropy->add_option("--in", opt.in_path, "Compute the entropy of a JSI file instead");
  entropy->add_flag("--bits", opt.bits, "Report entropies in bits");
  auto* ingest = app.add_subcommand("ingest", "Validate a measured JSI file and report its entropy");
  common(ingest);
  ingest->add_option("--in", opt.in_path, "JSI file to read")->required();
  ingest->add_flag("--bits", opt.bits, "Report entropies in bits");

  struct SweepCmd {
    CLI::App* app;
    SweepParameter which;
  };
  std::vector<SweepCmd> sweeps;
  for (auto [name, which, help] : {std::tuple{"sweep-coupling", SweepParameter::coupling_ratio,
                                              "Entropy vs coupling ratio per detuning (sweepv1)"},
                                   std::tuple{"sweep-pump", SweepParameter::pump_bandwidth_nm,
                                              "Entropy vs pump bandwidth per coupling ratio (sweepv1)"},
                                   std::tuple{"sweep-detuning", SweepParameter::cavity_detuning_nm,
                                              "Entropy vs cavity detuning per coupling ratio (sweepv1)"}}) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    sub->add_option("--values", opt.values, "Comma-separated sweep values (default plan otherwise)");
    sub->add_option("--series", opt.series, "Comma-separated series values, or 'none'");
    sub->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
    sweeps.push_back({sub, which});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (state->parsed()) return detail::cmd_state(opt, out);
    if (transmit->parsed()) return detail::cmd_transmit(opt, out);
    if (entropy->parsed()) return detail::cmd_entropy(opt, out);
    if (ingest->parsed()) return detail::cmd_ingest(opt, out);
    for (const auto& s : sweeps)
      if (s.app->parsed()) return detail::cmd_sweep(opt, s.which, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  err << app.help();
  return kExitValidation;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"biphoton"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace biphoton::cli
