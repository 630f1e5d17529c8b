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
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "biphoton/cavity.hpp"
#include "biphoton/config.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/state.hpp"

namespace biphoton {

enum class SweepParameter { coupling_ratio, cavity_detuning_nm, pump_bandwidth_nm };

inline const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::coupling_ratio: return "coupling_ratio";
    case SweepParameter::cavity_detuning_nm: return "cavity_detuning_nm";
    case SweepParameter::pump_bandwidth_nm: return "pump_bandwidth_nm";
  }
  return "unknown";
}

struct SweepSeries {
  SweepParameter parameter = SweepParameter::cavity_detuning_nm;
  std::vector<double> values;
};

struct SweepPlan {
  SimConfig base;
  SweepParameter swept = SweepParameter::coupling_ratio;
  std::vector<double> values;
  std::optional<SweepSeries> series;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

struct SweepRow {
  std::optional<SweepParameter> series_parameter;
  double series_value = 0.0;
  SweepParameter sweep_parameter = SweepParameter::coupling_ratio;
  double sweep_value = 0.0;
  double entropy = 0.0;
  double delta = 0.0;  // entropy minus the input-state entropy of the same point
  std::vector<std::string> flags;
};

/// Input-state and empty (two-sided) cavity entropies at one sweep value.
struct ReferencePoint {
  double sweep_value = 0.0;
  double input_entropy = 0.0;
  double empty_entropy = 0.0;
};

struct SweepResult {
  SweepParameter swept = SweepParameter::coupling_ratio;
  std::optional<SweepParameter> series_parameter;
  /// Ordered by series value, then sweep value.
  std::vector<SweepRow> rows;
  /// References for the unmodified base config.
  double input_entropy = 0.0;
  double empty_entropy = 0.0;
  /// Per-sweep-value references; filled for pump-bandwidth sweeps, where the
  /// input state itself changes along the sweep.
  std::vector<ReferencePoint> references;

  std::vector<SweepRow> series_rows(double series_value) const {
    std::vector<SweepRow> out;
    for (const auto& r : rows)
      if (r.series_value == series_value) out.push_back(r);
    return out;
  }
};

/// Sets one swept quantity on a config. Detuning moves the cavity relative
/// to the emitter: cavity wavelength = emitter wavelength + detuning.
inline void apply_parameter(SimConfig& cfg, SweepParameter p, double value) {
  switch (p) {
    case SweepParameter::coupling_ratio: cfg.cavity.coupling_ratio = value; break;
    case SweepParameter::cavity_detuning_nm: cfg.cavity.center_nm = cfg.cavity.emitter_nm + value; break;
    case SweepParameter::pump_bandwidth_nm: cfg.pump.bandwidth_nm = value; break;
  }
}

/// The config a single sweep point evaluates.
inline SimConfig point_config(const SweepPlan& plan, std::optional<double> series_value, double sweep_value) {
  SimConfig cfg = plan.base;
  if (plan.series && series_value) apply_parameter(cfg, plan.series->parameter, *series_value);
  apply_parameter(cfg, plan.swept, sweep_value);
  validate(cfg);
  return cfg;
}

namespace detail {

inline void check_values(const std::vector<double>& values, SweepParameter p, const SimConfig& base,
                         const char* what) {
  if (values.empty()) throw UsageError(std::string(what) + " values must not be empty");
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (!std::isfinite(v)) throw UsageError(std::string(what) + " values must be finite");
    if (k > 0 && !(v > values[k - 1])) {
      throw UsageError(std::string(what) + " values must be strictly increasing");
    }
    switch (p) {
      case SweepParameter::coupling_ratio:
        if (!(v > 0.0)) throw UsageError("coupling ratios must be positive");
        break;
      case SweepParameter::pump_bandwidth_nm:
        if (!(v > 0.0) || v >= base.pump.center_down_nm / 2.0) {
          throw UsageError("pump bandwidths must be positive and below the pump wavelength");
        }
        break;
      case SweepParameter::cavity_detuning_nm:
        if (!(base.cavity.emitter_nm + v > 0.0)) throw UsageError("detuning moves the cavity below 0 nm");
        break;
    }
  }
}

inline void validate_plan(const SweepPlan& plan) {
  validate(plan.base);
  check_values(plan.values, plan.swept, plan.base, "sweep");
  if (plan.series) {
    if (plan.series->parameter == plan.swept) throw UsageError("series and sweep parameter must differ");
    check_values(plan.series->values, plan.series->parameter, plan.base, "series");
  }
  const bool needs_dicke = plan.swept == SweepParameter::coupling_ratio ||
                           (plan.series && plan.series->parameter == SweepParameter::coupling_ratio);
  if (needs_dicke && plan.base.cavity.kind != CavityKind::dicke) {
    throw UsageError("coupling sweeps need a dicke cavity in the base config");
  }
}

/// Runs fn(k) for k in [0, n) on up to `threads` workers. Each k writes only
/// its own output slot, so results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  std::mutex error_mutex;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n && !failed; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

inline double empty_cavity_entropy(SimConfig cfg, const BiphotonAmplitude& input) {
  cfg.cavity.kind = CavityKind::two_sided;
  return entropy_of(apply_idler_transfer(input, transfer(make_cavity(cfg), input.grid().idler())));
}

}  // namespace detail

/// Evaluates every (series, sweep) point of a plan. Rows are ordered by
/// series value then sweep value regardless of execution order.
inline SweepResult run_sweep(const SweepPlan& plan) {
  detail::validate_plan(plan);
  const auto grid = make_grid(plan.base);

  SweepResult result;
  result.swept = plan.swept;
  if (plan.series) result.series_parameter = plan.series->parameter;

  const auto base_input = make_input_state(plan.base, grid);
  result.input_entropy = entropy_of(base_input);
  result.empty_entropy = detail::empty_cavity_entropy(plan.base, base_input);

  std::vector<std::optional<double>> series_values;
  if (plan.series) {
    for (double v : plan.series->values) series_values.emplace_back(v);
  } else {
    series_values.emplace_back(std::nullopt);
  }

  // The input state only depends on the pump, so it is built once per pump
  // bandwidth and shared by every row using it.
  const bool pump_swept = plan.swept == SweepParameter::pump_bandwidth_nm;
  const bool pump_series = plan.series && plan.series->parameter == SweepParameter::pump_bandwidth_nm;
  const std::size_t n_sweep = plan.values.size();
  const std::size_t n_rows = series_values.size() * n_sweep;
  result.rows.resize(n_rows);

  const std::size_t n_inputs = pump_swept ? n_sweep : pump_series ? series_values.size() : 0;
  std::vector<std::optional<BiphotonAmplitude>> inputs(n_inputs);
  std::vector<double> input_entropies(n_inputs);
  if (pump_swept) result.references.resize(n_sweep);
  detail::parallel_for(n_inputs, plan.threads, [&](std::size_t j) {
    SimConfig cfg = plan.base;
    if (pump_swept) {
      apply_parameter(cfg, plan.swept, plan.values[j]);
    } else {
      apply_parameter(cfg, plan.series->parameter, *series_values[j]);
    }
    inputs[j] = make_input_state(cfg, grid);
    input_entropies[j] = entropy_of(*inputs[j]);
    if (pump_swept) {
      result.references[j] = {plan.values[j], input_entropies[j], detail::empty_cavity_entropy(cfg, *inputs[j])};
    }
  });
  auto input_slot = [&](std::size_t s, std::size_t k) -> std::optional<std::size_t> {
    if (pump_swept) return k;
    if (pump_series) return s;
    return std::nullopt;
  };

  detail::parallel_for(n_rows, plan.threads, [&](std::size_t r) {
    const std::size_t s = r / n_sweep;
    const std::size_t k = r % n_sweep;
    const auto cfg = point_config(plan, series_values[s], plan.values[k]);
    const auto model = make_cavity(cfg);
    const auto slot = input_slot(s, k);
    const auto& input = slot ? *inputs[*slot] : base_input;
    const double s_in = slot ? input_entropies[*slot] : result.input_entropy;
    const double s_out = entropy_of(apply_idler_transfer(input, transfer(model, grid.idler())));

    SweepRow& row = result.rows[r];
    if (plan.series) row.series_parameter = plan.series->parameter;
    row.series_value = series_values[s].value_or(0.0);
    row.sweep_parameter = plan.swept;
    row.sweep_value = plan.values[k];
    row.entropy = s_out;
    row.delta = s_out - s_in;
    row.flags = model.flags();
  });
  return result;
}

/// Entropy versus lambda / gamma, optionally for a series of detunings.
inline SweepResult run_coupling_sweep(const SweepPlan& plan) {
  if (plan.swept != SweepParameter::coupling_ratio) throw UsageError("coupling sweep must sweep coupling_ratio");
  return run_sweep(plan);
}

/// Entropy versus pump bandwidth, optionally for a series of couplings; the
/// empty-cavity reference is evaluated at every bandwidth.
inline SweepResult run_pump_bandwidth_sweep(const SweepPlan& plan) {
  if (plan.swept != SweepParameter::pump_bandwidth_nm) {
    throw UsageError("pump-bandwidth sweep must sweep pump_bandwidth_nm");
  }
  return run_sweep(plan);
}

/// Entropy versus cavity detuning from the fixed emitter wavelength.
inline SweepResult run_detuning_sweep(const SweepPlan& plan) {
  if (plan.swept != SweepParameter::cavity_detuning_nm) {
    throw UsageError("detuning sweep must sweep cavity_detuning_nm");
  }
  if (plan.base.cavity.kind != CavityKind::dicke) throw UsageError("detuning sweeps need a dicke cavity");
  return run_sweep(plan);
}

struct EntropyCrossing {
  double coupling_ratio = 0.0;
  /// Set when the first sample already exceeds the input entropy, so the
  /// true crossing lies at or below the swept range.
  bool boundary = false;
};

/// lambda / gamma at which the output entropy first rises above the input
/// entropy, by linear interpolation between adjacent samples.
inline std::optional<EntropyCrossing> find_entropy_crossing(const SweepResult& result, double series_value) {
  if (result.swept != SweepParameter::coupling_ratio) {
    throw UsageError("entropy crossing needs a coupling sweep");
  }
  const auto rows = result.series_rows(series_value);
  if (rows.size() < 2) throw UsageError("entropy crossing needs at least two sweep rows");
  const double target = result.input_entropy;
  if (rows.front().entropy > target) return EntropyCrossing{rows.front().sweep_value, true};
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& a = rows[k - 1];
    const auto& b = rows[k];
    if (a.entropy <= target && b.entropy > target) {
      const double t = (target - a.entropy) / (b.entropy - a.entropy);
      return EntropyCrossing{a.sweep_value + t * (b.sweep_value - a.sweep_value), false};
    }
  }
  return std::nullopt;
}

// Default plans.

inline std::vector<double> decimal_range(int first, int last, int step, double scale) {
  std::vector<double> v;
  for (int k = first; k <= last; k += step) v.push_back(k / scale);
  return v;
}

/// lambda/gamma 0.5..3.0 step 0.05, detunings -4, -2, 0, 2, 4 nm.
inline SweepPlan default_coupling_plan(const SimConfig& base) {
  return {base, SweepParameter::coupling_ratio, decimal_range(50, 300, 5, 100.0),
          SweepSeries{SweepParameter::cavity_detuning_nm, {-4.0, -2.0, 0.0, 2.0, 4.0}}};
}

/// Pump FWHM 0.5..10 nm step 0.25, couplings 0.75, 1.0, 1.35, 2.0 gamma.
inline SweepPlan default_pump_plan(const SimConfig& base) {
  return {base, SweepParameter::pump_bandwidth_nm, decimal_range(2, 40, 1, 4.0),
          SweepSeries{SweepParameter::coupling_ratio, {0.75, 1.0, 1.35, 2.0}}};
}

/// Detuning -4..4 nm step 0.5, couplings 0.75, 1.0, 2.5 gamma.
inline SweepPlan default_detuning_plan(const SimConfig& base) {
  return {base, SweepParameter::cavity_detuning_nm, decimal_range(-8, 8, 1, 2.0),
          SweepSeries{SweepParameter::coupling_ratio, {0.75, 1.0, 2.5}}};
}

}  // namespace biphoton
