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
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/config.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/state.hpp"
#include "biphoton/sweep.hpp"
#include "biphoton/transfer_curve.hpp"
#include "biphoton/units.hpp"

// Plain-text data files: '#'-prefixed header (format tag, config echo,
// flags, column schema) followed by comma-separated rows, LF line endings,
// numbers with 9 significant digits.
namespace biphoton {

inline constexpr std::string_view kJsiFormat = "jsiv1";
inline constexpr std::string_view kCurveFormat = "curvev1";
inline constexpr std::string_view kSweepFormat = "sweepv1";

namespace detail {

inline std::string num9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

inline std::string join(const std::vector<std::string>& items, std::string_view sep, std::string_view empty) {
  if (items.empty()) return std::string(empty);
  std::string out = items.front();
  for (std::size_t k = 1; k < items.size(); ++k) out.append(sep).append(items[k]);
  return out;
}

inline void write_header(std::ostream& os, std::string_view format, const SimConfig& cfg,
                         const std::vector<std::string>& flags) {
  os << "# format: " << format << '\n';
  for (const auto& line : config_echo(cfg)) os << "# config: " << line << '\n';
  os << "# defaulted: " << join(cfg.defaulted_keys, ",", "none") << '\n';
  os << "# flags: " << join(flags, ",", "none") << '\n';
}

}  // namespace detail

/// Writes `content` to `path` through a temporary file and a rename, so a
/// failed write never leaves a partial file behind.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

/// jsiv1: signal_nm, idler_nm, re, im, intensity, row-major over the grid.
inline std::string format_jsi(const BiphotonAmplitude& state, const SimConfig& cfg,
                              const std::vector<std::string>& flags = {}) {
  std::ostringstream os;
  detail::write_header(os, kJsiFormat, cfg, flags);
  os << "# columns: signal_nm,idler_nm,re,im,intensity\n";
  const auto& g = state.grid();
  std::vector<std::string> idler_nm(g.n_idler());
  for (std::size_t i = 0; i < g.n_idler(); ++i) idler_nm[i] = detail::num9(wavelength_from_omega(g.idler()[i]));
  for (std::size_t s = 0; s < g.n_signal(); ++s) {
    const auto signal_nm = detail::num9(wavelength_from_omega(g.signal()[s]));
    for (std::size_t i = 0; i < g.n_idler(); ++i) {
      const Complex f = state(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i));
      os << signal_nm << ',' << idler_nm[i] << ',' << detail::num9(f.real()) << ',' << detail::num9(f.imag())
         << ',' << detail::num9(std::norm(f)) << '\n';
    }
  }
  return os.str();
}

/// curvev1: wavelength_nm, re, im, transmission, phase_rad.
inline std::string format_curve(const TransferCurve& curve, const SimConfig& cfg) {
  std::ostringstream os;
  detail::write_header(os, kCurveFormat, cfg, curve.flags);
  os << "# columns: wavelength_nm,re,im,transmission,phase_rad\n";
  for (std::size_t k = 0; k < curve.size(); ++k) {
    os << detail::num9(wavelength_from_omega(curve.axis[k])) << ',' << detail::num9(curve.values[k].real())
       << ',' << detail::num9(curve.values[k].imag()) << ',' << detail::num9(curve.transmission[k]) << ','
       << detail::num9(curve.phase[k]) << '\n';
  }
  return os.str();
}

/// sweepv1: one row per (series, sweep) pair; references and, for coupling
/// sweeps, entropy crossings go in the header.
inline std::string format_sweep(const SweepResult& result, const SimConfig& cfg) {
  std::ostringstream os;
  detail::write_header(os, kSweepFormat, cfg, {});
  os << "# reference: input_entropy_nats = " << detail::num9(result.input_entropy) << '\n';
  os << "# reference: empty_cavity_entropy_nats = " << detail::num9(result.empty_entropy) << '\n';
  for (const auto& ref : result.references) {
    os << "# reference_point: sweep_value = " << detail::num9(ref.sweep_value)
       << ", input_entropy_nats = " << detail::num9(ref.input_entropy)
       << ", empty_cavity_entropy_nats = " << detail::num9(ref.empty_entropy) << '\n';
  }
  if (result.swept == SweepParameter::coupling_ratio) {
    std::vector<double> series;
    for (const auto& r : result.rows)
      if (series.empty() || series.back() != r.series_value) series.push_back(r.series_value);
    for (double sv : series) {
      os << "# crossing: series_value = " << detail::num9(sv) << ", coupling_ratio = ";
      if (result.series_rows(sv).size() < 2) {
        os << "n/a\n";
        continue;
      }
      const auto c = find_entropy_crossing(result, sv);
      if (c) {
        os << detail::num9(c->coupling_ratio) << (c->boundary ? ", boundary" : "") << '\n';
      } else {
        os << "none\n";
      }
    }
  }
  os << "# columns: series_param,series_value,sweep_param,sweep_value,entropy_nats,delta_vs_input_nats,flags\n";
  for (const auto& r : result.rows) {
    os << (r.series_parameter ? to_string(*r.series_parameter) : "none") << ',' << detail::num9(r.series_value)
       << ',' << to_string(r.sweep_parameter) << ',' << detail::num9(r.sweep_value) << ','
       << detail::num9(r.entropy) << ',' << detail::num9(r.delta) << ',' << detail::join(r.flags, "|", "-")
       << '\n';
  }
  return os.str();
}

inline void export_jsi(const BiphotonAmplitude& state, const SimConfig& cfg, const std::filesystem::path& path,
                       const std::vector<std::string>& flags = {}) {
  write_file_atomic(path, format_jsi(state, cfg, flags));
}

inline void export_curve(const TransferCurve& curve, const SimConfig& cfg, const std::filesystem::path& path) {
  write_file_atomic(path, format_curve(curve, cfg));
}

inline void export_sweep(const SweepResult& result, const SimConfig& cfg, const std::filesystem::path& path) {
  write_file_atomic(path, format_sweep(result, cfg));
}

/// Joint spectral intensity read from a file, e.g. a coincidence measurement.
/// Axes are in nm and may be non-uniform; `amplitude` is present only when the
/// file also carries re/im columns.
struct MeasuredJsi {
  std::vector<double> signal_nm;
  std::vector<double> idler_nm;
  Eigen::MatrixXd intensity;
  std::optional<Eigen::MatrixXcd> amplitude;
};

/// Generic table reader for the text formats above.
struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::string> header;  // '#' lines without the marker
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t k = 0; k < columns.size(); ++k)
      if (columns[k] == name) return k;
    return std::nullopt;
  }
};

namespace detail {
inline std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  const bool commas = line.find(',') != std::string_view::npos;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end;
    if (commas) {
      end = line.find(',', pos);
    } else {
      pos = line.find_first_not_of(" \t", pos);
      if (pos == std::string_view::npos) break;
      end = line.find_first_of(" \t", pos);
    }
    if (end == std::string_view::npos) end = line.size();
    out.emplace_back(trim(line.substr(pos, end - pos)));
    pos = end + 1;
  }
  return out;
}

inline bool parse_number(const std::string& s, double& v) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}
}  // namespace detail

/// Reads a delimited table (comma, tab or space separated). Column names come
/// from a '# columns:' header line or, failing that, a non-numeric first row.
inline DataTable read_table(std::istream& in) {
  DataTable t;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = detail::trim(line.substr(1));
      t.header.emplace_back(body);
      if (body.starts_with("columns:")) t.columns = detail::split_fields(detail::trim(body.substr(8)));
      continue;
    }
    auto fields = detail::split_fields(line);
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) numeric = numeric && detail::parse_number(fields[k], values[k]);
    if (!numeric) {
      if (t.rows.empty() && t.columns.empty()) {
        t.columns = std::move(fields);
        continue;
      }
      throw ValidationError("line " + std::to_string(line_no) + ": non-numeric field");
    }
    if (!t.columns.empty() && values.size() != t.columns.size()) {
      // Trailing text columns (e.g. sweep flags) are not numeric; only the
      // all-numeric schemas go through this reader.
      throw ValidationError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.columns.size()) +
                            " fields, got " + std::to_string(values.size()));
    }
    t.rows.push_back(std::move(values));
    t.row_lines.push_back(line_no);
  }
  return t;
}

inline DataTable read_table_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  return read_table(in);
}

/// Validates and reshapes a JSI table (row-major: the signal value stays fixed
/// while the idler value runs through its axis).
inline MeasuredJsi measured_jsi_from_table(const DataTable& t) {
  std::vector<std::string> cols = t.columns;
  if (cols.empty() && !t.rows.empty()) {
    if (t.rows.front().size() == 3) cols = {"signal_nm", "idler_nm", "intensity"};
    else if (t.rows.front().size() == 5) cols = {"signal_nm", "idler_nm", "re", "im", "intensity"};
  }
  DataTable named = t;
  named.columns = cols;
  const auto cs = named.column("signal_nm");
  const auto ci = named.column("idler_nm");
  const auto cint = named.column("intensity");
  if (!cs || !ci || !cint) throw ValidationError("JSI file needs signal_nm, idler_nm and intensity columns");
  const auto cre = named.column("re");
  const auto cim = named.column("im");
  if (t.rows.empty()) throw ValidationError("JSI file has no data rows");

  const auto& rows = t.rows;
  std::size_t n_idler = 0;
  while (n_idler < rows.size() && rows[n_idler][*cs] == rows[0][*cs]) ++n_idler;
  if (rows.size() % n_idler != 0) throw ValidationError("JSI rows do not form a rectangular grid");
  const std::size_t n_signal = rows.size() / n_idler;
  if (n_signal < 2 || n_idler < 2) throw ValidationError("JSI grid needs at least 2 points per axis");

  MeasuredJsi m;
  m.signal_nm.resize(n_signal);
  m.idler_nm.resize(n_idler);
  m.intensity.resize(static_cast<Eigen::Index>(n_signal), static_cast<Eigen::Index>(n_idler));
  const bool has_phase = cre && cim;
  if (has_phase) m.amplitude.emplace(m.intensity.rows(), m.intensity.cols());
  bool any_nonzero = false;
  for (std::size_t s = 0; s < n_signal; ++s) {
    for (std::size_t i = 0; i < n_idler; ++i) {
      const std::size_t r = s * n_idler + i;
      const auto& row = rows[r];
      const auto where = "cell (" + std::to_string(s) + ", " + std::to_string(i) + ") at line " +
                         std::to_string(t.row_lines[r]);
      if (i == 0) m.signal_nm[s] = row[*cs];
      if (row[*cs] != m.signal_nm[s]) throw ValidationError("signal axis is not row-major at " + where);
      if (s == 0) m.idler_nm[i] = row[*ci];
      if (row[*ci] != m.idler_nm[i]) throw ValidationError("idler axis differs between rows at " + where);
      const double v = row[*cint];
      if (!std::isfinite(v)) throw ValidationError("non-finite intensity at " + where);
      if (v < 0.0) throw ValidationError("negative intensity at " + where);
      any_nonzero = any_nonzero || v > 0.0;
      m.intensity(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = v;
      if (has_phase) {
        (*m.amplitude)(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = Complex(row[*cre], row[*cim]);
      }
    }
  }
  if (!any_nonzero) throw ValidationError("JSI intensities are all zero");
  auto monotone = [](const std::vector<double>& a) {
    bool inc = true, dec = true;
    for (std::size_t k = 1; k < a.size(); ++k) {
      inc = inc && a[k] > a[k - 1];
      dec = dec && a[k] < a[k - 1];
    }
    return inc || dec;
  };
  if (!monotone(m.signal_nm)) throw ValidationError("signal axis is not strictly monotone");
  if (!monotone(m.idler_nm)) throw ValidationError("idler axis is not strictly monotone");
  for (double v : m.signal_nm) detail::require_positive(v, "signal wavelength");
  for (double v : m.idler_nm) detail::require_positive(v, "idler wavelength");
  return m;
}

inline MeasuredJsi ingest_measured_jsi(const std::filesystem::path& path) {
  return measured_jsi_from_table(read_table_file(path));
}

inline constexpr std::string_view kIntensityOnlyFlag = "intensity-only lower-fidelity";

struct MeasuredEntropy {
  SchmidtSpectrum spectrum;
  std::vector<std::string> flags;
};

namespace detail {
/// Per-sample cell widths in angular frequency for a possibly non-uniform axis.
inline std::vector<double> cell_widths(const std::vector<double>& nm) {
  std::vector<double> w(nm.size());
  for (std::size_t k = 0; k < nm.size(); ++k) w[k] = omega_from_wavelength(nm[k]);
  std::vector<double> out(w.size());
  out.front() = std::abs(w[1] - w[0]);
  out.back() = std::abs(w[w.size() - 1] - w[w.size() - 2]);
  for (std::size_t k = 1; k + 1 < w.size(); ++k) out[k] = std::abs(w[k + 1] - w[k - 1]) / 2.0;
  return out;
}
}  // namespace detail

/// Schmidt spectrum of a file-borne JSI. Without re/im columns the amplitude
/// is taken as sqrt(intensity) with zero phase and the result is flagged.
inline MeasuredEntropy measured_entropy(const MeasuredJsi& m) {
  const auto ws = detail::cell_widths(m.signal_nm);
  const auto wi = detail::cell_widths(m.idler_nm);
  Eigen::MatrixXcd weighted(m.intensity.rows(), m.intensity.cols());
  for (Eigen::Index s = 0; s < weighted.rows(); ++s) {
    for (Eigen::Index i = 0; i < weighted.cols(); ++i) {
      const Complex f = m.amplitude ? (*m.amplitude)(s, i) : Complex(std::sqrt(m.intensity(s, i)), 0.0);
      weighted(s, i) = f * std::sqrt(ws[static_cast<std::size_t>(s)] * wi[static_cast<std::size_t>(i)]);
    }
  }
  MeasuredEntropy out{schmidt_of_matrix(weighted), {}};
  if (!m.amplitude) out.flags.emplace_back(kIntensityOnlyFlag);
  return out;
}

/// Rebuilds the config echoed in a file header ('config:' and 'defaulted:'
/// lines), so a file can be regenerated from its own header.
inline SimConfig config_from_header(const std::vector<std::string>& header) {
  std::string text;
  std::optional<std::string> defaulted;
  for (const auto& line : header) {
    if (line.starts_with("config:")) text += line.substr(7) + "\n";
    if (line.starts_with("defaulted:")) defaulted = std::string(detail::trim(std::string_view(line).substr(10)));
  }
  if (text.empty()) throw ValidationError("file header carries no config echo");
  auto cfg = parse_config(text);
  cfg.defaulted_keys.clear();
  if (defaulted && *defaulted != "none") {
    std::string_view rest = *defaulted;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      cfg.defaulted_keys.emplace_back(detail::trim(rest.substr(0, comma)));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }
  return cfg;
}

/// Rows of a sweepv1 file.
inline std::vector<SweepRow> parse_sweep_rows(std::istream& in) {
  auto param = [](const std::string& name, std::size_t line) -> std::optional<SweepParameter> {
    for (auto p : {SweepParameter::coupling_ratio, SweepParameter::cavity_detuning_nm,
                   SweepParameter::pump_bandwidth_nm}) {
      if (name == to_string(p)) return p;
    }
    if (name == "none") return std::nullopt;
    throw ValidationError("line " + std::to_string(line) + ": unknown sweep parameter '" + name + "'");
  };
  std::vector<SweepRow> rows;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto f = detail::split_fields(line);
    if (f.size() != 7) throw ValidationError("line " + std::to_string(line_no) + ": expected 7 fields");
    SweepRow r;
    r.series_parameter = param(f[0], line_no);
    const auto swept = param(f[2], line_no);
    if (!swept) throw ValidationError("line " + std::to_string(line_no) + ": missing sweep parameter");
    r.sweep_parameter = *swept;
    double* targets[] = {&r.series_value, &r.sweep_value, &r.entropy, &r.delta};
    const std::size_t idx[] = {1, 3, 4, 5};
    for (int k = 0; k < 4; ++k) {
      if (!detail::parse_number(f[idx[k]], *targets[k])) {
        throw ValidationError("line " + std::to_string(line_no) + ": bad number '" + f[idx[k]] + "'");
      }
    }
    if (f[6] != "-") {
      std::string_view rest = f[6];
      while (!rest.empty()) {
        const auto bar = rest.find('|');
        r.flags.emplace_back(rest.substr(0, bar));
        rest = bar == std::string_view::npos ? std::string_view{} : rest.substr(bar + 1);
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace biphoton
