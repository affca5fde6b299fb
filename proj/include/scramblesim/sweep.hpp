// Copyright 2026 The scramblesim Authors
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

// (alpha, gamma) grid sweeps: key = value configuration, a row-ordered
// tab-separated output file that doubles as a resume checkpoint, and
// per-panel figure data.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scramblesim/metrics.hpp"

namespace scramblesim {

/// count points spaced linearly over [min, max]; both ends included.
struct Grid {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  [[nodiscard]] std::vector<double> values() const;
  friend bool operator==(const Grid&, const Grid&) = default;
};

struct SweepConfig {
  std::vector<EncodingKind> protocols{EncodingKind::Scrambling, EncodingKind::Swap};
  Grid alpha_grid{0.0, 1.0, 51};
  Grid gamma_grid{0.0, 0.06, 31};
  double dt = 0.01;
  LogBase log_base = LogBase::Two;
  RateConvention rate_convention = RateConvention::Kraus;
  TotalNegativityMode total_negativity = TotalNegativityMode::ContiguousCuts;
  std::string output_path = "sweep.tsv";
  bool resume = false;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  /// Every field that affects the data, one "key = value" per line, in a
  /// form parse_config accepts.
  [[nodiscard]] std::string canonical_text() const;
  [[nodiscard]] AverageConfig average_config() const;
  [[nodiscard]] std::size_t row_count() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string field, const std::string& message);
  /// 1-based line in the config text, 0 when not tied to a line.
  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Lines are "key = value"; '#' starts a comment. Keys:
///   protocols = scrambling, swap
///   alpha_grid = min, max, count   (or alpha_min, alpha_max, alpha_count)
///   gamma_grid = min, max, count   (or gamma_min, gamma_max, gamma_count)
///   dt, log_base (2 | e), rate_convention (kraus | lindblad),
///   total_negativity (cuts | pairs), output_path, resume (true | false)
[[nodiscard]] SweepConfig parse_config(std::string_view text);
[[nodiscard]] SweepConfig load_config(const std::filesystem::path& path);

struct SweepRecord {
  EncodingKind protocol = EncodingKind::Scrambling;
  double alpha = 0.0;
  double gamma = 0.0;
  MetricsRecord metrics;
  double dt = 0.0;
  LogBase log_base = LogBase::Two;
  RateConvention rate_convention = RateConvention::Kraus;
  /// Empty when the row succeeded.
  std::string error;
};

using RowEvaluator = std::function<MetricsRecord(EncodingKind, double, double, const AverageConfig&)>;

struct SweepOptions {
  /// Worker threads; 0 reads SIM_THREADS, then falls back to the hardware
  /// concurrency.
  unsigned threads = 0;
  /// Stop after writing this many new rows, leaving a resumable file.
  std::optional<std::size_t> max_new_rows;
  /// Row evaluator; average_over_inputs when empty.
  RowEvaluator evaluate;
};

class SweepFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid point of one row. Rows run protocol-major, then alpha, then gamma.
struct RowKey {
  EncodingKind protocol;
  double alpha;
  double gamma;
};
[[nodiscard]] std::vector<RowKey> sweep_rows(const SweepConfig& cfg);

/// Evaluates the grid and writes cfg.output_path (unless empty), flushing
/// after each row. With cfg.resume, complete rows of an existing file with
/// the same header are kept and a trailing partial line is dropped. Returns
/// every row written so far, in row order.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, const SweepOptions& opts = {});

/// Header block (comment lines and the column line) of the sweep file.
[[nodiscard]] std::string sweep_file_header(const SweepConfig& cfg);
[[nodiscard]] std::string format_row(const SweepRecord& rec);
[[nodiscard]] SweepRecord parse_row(std::string_view line);
/// Rows of a sweep file written for cfg; throws SweepFileError on a header
/// mismatch or a malformed row.
[[nodiscard]] std::vector<SweepRecord> read_sweep_file(const std::filesystem::path& path, const SweepConfig& cfg);

enum class FigureId { Fig2, Fig3, Fig4, Fig7 };

[[nodiscard]] std::string_view to_string(FigureId f);
[[nodiscard]] FigureId parse_figure_id(std::string_view text);

class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes one tab-separated file per panel into out_dir and returns their
/// paths. Throws CoverageError when the records lack a needed grid slice.
std::vector<std::filesystem::path> emit_figure_data(const std::vector<SweepRecord>& records, FigureId figure,
                                                    const SweepConfig& cfg, const std::filesystem::path& out_dir);

/// "%.17g" ("nan" for NaN), which round-trips every double.
[[nodiscard]] std::string format_double(double v);

}  // namespace scramblesim
