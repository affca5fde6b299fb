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

#include "scramblesim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <span>
#include <sstream>
#include <thread>

namespace scramblesim {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kFileMagic = "# scramblesim sweep v1";
constexpr double kGridMatchTol = 1e-9;

const std::vector<std::string_view> kColumns{
    "protocol",      "alpha",        "gamma",        "fidelity_avg", "purity_avg",
    "purity_of_mean", "neg_cut34",   "neg_total_t1", "neg_total_t2", "neg_total_t3",
    "delta_E_U",     "delta_E_M",    "success_prob_avg", "excluded_inputs", "dt",
    "log_base",      "rate_convention", "error"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::optional<int> to_int(std::string_view text) {
  const auto v = to_double(text);
  if (!v || *v != std::floor(*v) || std::abs(*v) > 1e9) return std::nullopt;
  return static_cast<int>(*v);
}

double require_double(int line, const std::string& field, std::string_view text) {
  const auto v = to_double(text);
  if (!v || !std::isfinite(*v)) {
    throw ConfigError(line, field, "expected a finite number, got '" + std::string(trim(text)) + "'");
  }
  return *v;
}

int require_int(int line, const std::string& field, std::string_view text) {
  const auto v = to_int(text);
  if (!v) throw ConfigError(line, field, "expected an integer, got '" + std::string(trim(text)) + "'");
  return *v;
}

Grid parse_grid(int line, const std::string& field, std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ConfigError(line, field, "expected 'min, max, count'");
  return Grid{require_double(line, field, parts[0]), require_double(line, field, parts[1]),
              require_int(line, field, parts[2])};
}

void check_grid(const Grid& g, const std::string& name, int line, double lo, double hi) {
  if (g.count < 1) throw ConfigError(line, name + "_count", "grid needs at least one point");
  if (g.min < lo || g.min > hi) {
    throw ConfigError(line, name + "_min", name + " bounds must lie in [" + format_double(lo) + ", " +
                                               (std::isfinite(hi) ? format_double(hi) : "inf") + "]");
  }
  if (g.max < lo || g.max > hi) {
    throw ConfigError(line, name + "_max", name + " bounds must lie in [" + format_double(lo) + ", " +
                                               (std::isfinite(hi) ? format_double(hi) : "inf") + "]");
  }
  if (g.max < g.min) throw ConfigError(line, name + "_max", name + " max must be >= min");
  if (g.count == 1 && g.max != g.min) throw ConfigError(line, name + "_count", "a single point needs min == max");
}

std::string sanitize(std::string_view text) {
  std::string out(text);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SIM_THREADS")) {
    const auto v = to_int(env);
    if (!v || *v < 1) throw std::invalid_argument("SIM_THREADS must be a positive integer");
    return static_cast<unsigned>(*v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepRecord evaluate_row(const RowKey& key, const SweepConfig& cfg, const AverageConfig& avg,
                         const RowEvaluator& evaluate) {
  SweepRecord rec;
  rec.protocol = key.protocol;
  rec.alpha = key.alpha;
  rec.gamma = key.gamma;
  rec.dt = cfg.dt;
  rec.log_base = cfg.log_base;
  rec.rate_convention = cfg.rate_convention;
  try {
    rec.metrics = evaluate ? evaluate(key.protocol, key.alpha, key.gamma, avg)
                           : average_over_inputs(key.protocol, key.alpha, key.gamma, avg);
    rec.metrics.validate();
  } catch (const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.metrics = MetricsRecord{nan, nan, nan, nan, nan, nan, nan, nan, nan, nan, {}};
    rec.error = sanitize(e.what());
    if (rec.error.empty()) rec.error = "unknown error";
  }
  return rec;
}

bool same_key(const SweepRecord& rec, const RowKey& key) {
  return rec.protocol == key.protocol && format_double(rec.alpha) == format_double(key.alpha) &&
         format_double(rec.gamma) == format_double(key.gamma);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SweepFileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Rows of an existing sweep file plus the byte length of its complete part.
struct ExistingFile {
  std::vector<SweepRecord> rows;
  std::size_t complete_bytes = 0;
};

ExistingFile scan_sweep_text(const std::string& text, const SweepConfig& cfg, const fs::path& path) {
  const std::string header = sweep_file_header(cfg);
  if (text.compare(0, header.size(), header) != 0) {
    throw SweepFileError(path.string() + " was written for a different configuration");
  }
  const std::vector<RowKey> keys = sweep_rows(cfg);
  ExistingFile out;
  std::size_t pos = header.size();
  out.complete_bytes = pos;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;  // partial last line
    const std::string_view line(text.data() + pos, nl - pos);
    SweepRecord rec;
    try {
      rec = parse_row(line);
    } catch (const std::exception& e) {
      throw SweepFileError(path.string() + ": row " + std::to_string(out.rows.size() + 1) + ": " + e.what());
    }
    if (out.rows.size() >= keys.size() || !same_key(rec, keys[out.rows.size()])) {
      throw SweepFileError(path.string() + ": row " + std::to_string(out.rows.size() + 1) +
                           " does not match the configured grid");
    }
    out.rows.push_back(std::move(rec));
    pos = nl + 1;
    out.complete_bytes = pos;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> Grid::values() const {
  std::vector<double> out;
  if (count < 1) return out;
  if (count == 1) return {min};
  out.reserve(count);
  const double step = (max - min) / (count - 1);
  for (int i = 0; i < count - 1; ++i) out.push_back(min + i * step);
  out.push_back(max);
  return out;
}

ConfigError::ConfigError(int line, std::string field, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + field + ": " +
                         message),
      line_(line),
      field_(std::move(field)) {}

void SweepConfig::validate() const {
  if (protocols.empty()) throw ConfigError(0, "protocols", "at least one protocol is required");
  check_grid(alpha_grid, "alpha", 0, 0.0, 1.0);
  check_grid(gamma_grid, "gamma", 0, 0.0, std::numeric_limits<double>::infinity());
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError(0, "dt", "dt must be > 0");
}

std::string SweepConfig::canonical_text() const {
  std::vector<std::string> kinds;
  for (auto k : protocols) kinds.emplace_back(to_string(k));
  std::ostringstream os;
  os << "protocols = " << join(kinds, ',') << '\n';
  os << "alpha_grid = " << format_double(alpha_grid.min) << ", " << format_double(alpha_grid.max) << ", "
     << alpha_grid.count << '\n';
  os << "gamma_grid = " << format_double(gamma_grid.min) << ", " << format_double(gamma_grid.max) << ", "
     << gamma_grid.count << '\n';
  os << "dt = " << format_double(dt) << '\n';
  os << "log_base = " << to_string(log_base) << '\n';
  os << "rate_convention = " << to_string(rate_convention) << '\n';
  os << "total_negativity = " << to_string(total_negativity) << '\n';
  return os.str();
}

AverageConfig SweepConfig::average_config() const {
  AverageConfig avg;
  avg.run.evolution.dt = dt;
  avg.run.rate_convention = rate_convention;
  avg.metrics.log_base = log_base;
  avg.metrics.total_mode = total_negativity;
  return avg;
}

std::size_t SweepConfig::row_count() const {
  return protocols.size() * static_cast<std::size_t>(alpha_grid.count) * static_cast<std::size_t>(gamma_grid.count);
}

SweepConfig parse_config(std::string_view text) {
  SweepConfig cfg;
  std::set<std::string> seen;
  int alpha_line = 0;
  int gamma_line = 0;
  int line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, std::string(line), "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "", "missing key before '='");
    if (!seen.insert(key).second) throw ConfigError(line_no, key, "duplicate key");

    try {
      if (key == "protocols") {
        cfg.protocols.clear();
        for (auto item : split(value, ',')) {
          const auto kind = parse_encoding_kind(trim(item));
          if (std::find(cfg.protocols.begin(), cfg.protocols.end(), kind) != cfg.protocols.end()) {
            throw ConfigError(line_no, key, "protocol listed twice");
          }
          cfg.protocols.push_back(kind);
        }
      } else if (key == "alpha_grid") {
        cfg.alpha_grid = parse_grid(line_no, key, value);
        alpha_line = line_no;
      } else if (key == "gamma_grid") {
        cfg.gamma_grid = parse_grid(line_no, key, value);
        gamma_line = line_no;
      } else if (key == "alpha_min") {
        cfg.alpha_grid.min = require_double(line_no, key, value);
        alpha_line = line_no;
      } else if (key == "alpha_max") {
        cfg.alpha_grid.max = require_double(line_no, key, value);
        alpha_line = line_no;
      } else if (key == "alpha_count") {
        cfg.alpha_grid.count = require_int(line_no, key, value);
        alpha_line = line_no;
      } else if (key == "gamma_min") {
        cfg.gamma_grid.min = require_double(line_no, key, value);
        gamma_line = line_no;
      } else if (key == "gamma_max") {
        cfg.gamma_grid.max = require_double(line_no, key, value);
        gamma_line = line_no;
      } else if (key == "gamma_count") {
        cfg.gamma_grid.count = require_int(line_no, key, value);
        gamma_line = line_no;
      } else if (key == "dt") {
        cfg.dt = require_double(line_no, key, value);
        if (!(cfg.dt > 0.0)) throw ConfigError(line_no, key, "dt must be > 0");
      } else if (key == "log_base") {
        cfg.log_base = parse_log_base(value);
      } else if (key == "rate_convention") {
        cfg.rate_convention = parse_rate_convention(value);
      } else if (key == "total_negativity") {
        cfg.total_negativity = parse_total_negativity_mode(value);
      } else if (key == "output_path") {
        if (value.empty()) throw ConfigError(line_no, key, "output_path must not be empty");
        cfg.output_path = std::string(value);
      } else if (key == "resume") {
        if (value == "true") {
          cfg.resume = true;
        } else if (value == "false") {
          cfg.resume = false;
        } else {
          throw ConfigError(line_no, key, "expected true or false");
        }
      } else {
        throw ConfigError(line_no, key, "unknown key");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line_no, key, e.what());
    }
  }
  const auto mixed = [&](const char* grid, const char* prefix) {
    const bool whole = seen.count(grid) > 0;
    const bool parts = seen.count(std::string(prefix) + "_min") || seen.count(std::string(prefix) + "_max") ||
                       seen.count(std::string(prefix) + "_count");
    if (whole && parts) throw ConfigError(0, grid, std::string("give either ") + grid + " or its parts, not both");
  };
  mixed("alpha_grid", "alpha");
  mixed("gamma_grid", "gamma");
  check_grid(cfg.alpha_grid, "alpha", alpha_line, 0.0, 1.0);
  check_grid(cfg.gamma_grid, "gamma", gamma_line, 0.0, std::numeric_limits<double>::infinity());
  cfg.validate();
  return cfg;
}

SweepConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "config", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<RowKey> sweep_rows(const SweepConfig& cfg) {
  std::vector<RowKey> rows;
  rows.reserve(cfg.row_count());
  const auto alphas = cfg.alpha_grid.values();
  const auto gammas = cfg.gamma_grid.values();
  for (auto kind : cfg.protocols) {
    for (double a : alphas) {
      for (double g : gammas) rows.push_back(RowKey{kind, a, g});
    }
  }
  return rows;
}

std::string sweep_file_header(const SweepConfig& cfg) {
  std::ostringstream os;
  os << kFileMagic << '\n';
  os << "# units: hbar = 1, times in gate units tau = 1, gamma in 1/tau, negativities in log base "
     << to_string(cfg.log_base) << '\n';
  std::istringstream lines(cfg.canonical_text());
  for (std::string line; std::getline(lines, line);) os << "# config: " << line << '\n';
  os << join(std::vector<std::string>(kColumns.begin(), kColumns.end()), '\t') << '\n';
  return os.str();
}

std::string format_row(const SweepRecord& rec) {
  const MetricsRecord& m = rec.metrics;
  std::vector<std::string> f;
  f.emplace_back(to_string(rec.protocol));
  for (double v : {rec.alpha, rec.gamma, m.fidelity_avg, m.purity_avg, m.purity_of_mean, m.neg_cut34,
                   m.neg_total_t1, m.neg_total_t2, m.neg_total_t3, m.delta_E_U, m.delta_E_M, m.success_prob_avg}) {
    f.push_back(format_double(v));
  }
  f.push_back(m.excluded_inputs.empty() ? "-" : join(m.excluded_inputs, ','));
  f.push_back(format_double(rec.dt));
  f.emplace_back(to_string(rec.log_base));
  f.emplace_back(to_string(rec.rate_convention));
  f.push_back(rec.error.empty() ? "-" : sanitize(rec.error));
  return join(f, '\t');
}

SweepRecord parse_row(std::string_view line) {
  const auto f = split(line, '\t');
  if (f.size() != kColumns.size()) {
    throw std::invalid_argument("expected " + std::to_string(kColumns.size()) + " fields, got " +
                                std::to_string(f.size()));
  }
  auto num = [&](std::size_t i) {
    const auto v = to_double(f[i]);
    if (!v) throw std::invalid_argument("column " + std::string(kColumns[i]) + " is not a number");
    return *v;
  };
  SweepRecord rec;
  rec.protocol = parse_encoding_kind(f[0]);
  rec.alpha = num(1);
  rec.gamma = num(2);
  MetricsRecord& m = rec.metrics;
  m.fidelity_avg = num(3);
  m.purity_avg = num(4);
  m.purity_of_mean = num(5);
  m.neg_cut34 = num(6);
  m.neg_total_t1 = num(7);
  m.neg_total_t2 = num(8);
  m.neg_total_t3 = num(9);
  m.delta_E_U = num(10);
  m.delta_E_M = num(11);
  m.success_prob_avg = num(12);
  if (f[13] != "-") {
    for (auto label : split(f[13], ',')) m.excluded_inputs.emplace_back(label);
  }
  rec.dt = num(14);
  rec.log_base = parse_log_base(f[15]);
  rec.rate_convention = parse_rate_convention(f[16]);
  if (f[17] != "-") rec.error = std::string(f[17]);
  return rec;
}

std::vector<SweepRecord> read_sweep_file(const fs::path& path, const SweepConfig& cfg) {
  return scan_sweep_text(read_file(path), cfg, path).rows;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, const SweepOptions& opts) {
  cfg.validate();
  const std::vector<RowKey> keys = sweep_rows(cfg);
  const AverageConfig avg = cfg.average_config();
  const bool persist = !cfg.output_path.empty();
  const fs::path path(cfg.output_path);

  std::vector<SweepRecord> records;
  std::ofstream out;
  if (persist) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    bool fresh = true;
    if (cfg.resume && fs::exists(path)) {
      const std::string text = read_file(path);
      const std::string header = sweep_file_header(cfg);
      // A file cut short inside the header is restarted from scratch.
      if (text.size() >= header.size() || header.compare(0, text.size(), text) != 0) {
        ExistingFile existing = scan_sweep_text(text, cfg, path);
        fs::resize_file(path, existing.complete_bytes);
        records = std::move(existing.rows);
        fresh = false;
      }
    }
    if (fresh) {
      out.open(path, std::ios::binary | std::ios::trunc);
      if (!out) throw SweepFileError("cannot write " + path.string());
      out << sweep_file_header(cfg);
      out.flush();
    } else {
      out.open(path, std::ios::binary | std::ios::app);
      if (!out) throw SweepFileError("cannot append to " + path.string());
    }
  }

  const std::size_t begin = records.size();
  std::size_t end = keys.size();
  if (opts.max_new_rows) end = std::min(end, begin + *opts.max_new_rows);
  if (begin >= end) return records;

  const std::size_t jobs = end - begin;
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(worker_count(opts.threads), jobs));
  std::vector<std::optional<SweepRecord>> results(jobs);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs;) {
      SweepRecord rec = evaluate_row(keys[begin + j], cfg, avg, opts.evaluate);
      {
        const std::lock_guard lock(mu);
        results[j] = std::move(rec);
      }
      ready.notify_all();
    }
  };

  std::vector<std::thread> pool;
  if (threads > 1) {
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  // The calling thread is the single writer; rows go out in index order.
  for (std::size_t j = 0; j < jobs; ++j) {
    if (threads <= 1) {
      results[j] = evaluate_row(keys[begin + j], cfg, avg, opts.evaluate);
    } else {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return results[j].has_value(); });
    }
    SweepRecord rec = std::move(*results[j]);
    results[j].reset();
    if (persist) {
      out << format_row(rec) << '\n';
      out.flush();
    }
    records.push_back(std::move(rec));
  }
  for (auto& t : pool) t.join();
  if (persist && !out) throw SweepFileError("write failed for " + path.string());
  return records;
}

std::string_view to_string(FigureId f) {
  switch (f) {
    case FigureId::Fig2: return "fig2";
    case FigureId::Fig3: return "fig3";
    case FigureId::Fig4: return "fig4";
    case FigureId::Fig7: return "fig7";
  }
  return "?";
}

FigureId parse_figure_id(std::string_view text) {
  if (text == "fig2") return FigureId::Fig2;
  if (text == "fig3") return FigureId::Fig3;
  if (text == "fig4") return FigureId::Fig4;
  if (text == "fig7") return FigureId::Fig7;
  throw std::invalid_argument("unknown figure '" + std::string(text) + "' (fig2, fig3, fig4 or fig7)");
}

namespace {

using Metric = double (*)(const MetricsRecord&);

struct MetricColumn {
  std::string_view name;
  Metric get;
};

const MetricColumn kFidelity{"fidelity_avg", [](const MetricsRecord& m) { return m.fidelity_avg; }};
const MetricColumn kPurity{"purity_avg", [](const MetricsRecord& m) { return m.purity_avg; }};
const MetricColumn kNegCut{"neg_cut34", [](const MetricsRecord& m) { return m.neg_cut34; }};
const MetricColumn kDeltaU{"delta_E_U", [](const MetricsRecord& m) { return m.delta_E_U; }};
const MetricColumn kDeltaM{"delta_E_M", [](const MetricsRecord& m) { return m.delta_E_M; }};

constexpr double kGammaCuts[] = {0.0, 0.038, 0.06};
constexpr double kAlphaCuts[] = {0.0, 0.5, 1.0};

class RecordIndex {
 public:
  explicit RecordIndex(const std::vector<SweepRecord>& records) : records_(records) {}

  const SweepRecord& at(EncodingKind kind, double alpha, double gamma) const {
    for (const auto& r : records_) {
      if (r.protocol == kind && std::abs(r.alpha - alpha) <= kGridMatchTol &&
          std::abs(r.gamma - gamma) <= kGridMatchTol) {
        return r;
      }
    }
    throw CoverageError("no record for " + std::string(to_string(kind)) + " at alpha = " + format_double(alpha) +
                        ", gamma = " + format_double(gamma));
  }

 private:
  const std::vector<SweepRecord>& records_;
};

std::vector<double> require_cuts(const std::vector<double>& grid, std::span<const double> cuts,
                                 const char* axis) {
  std::vector<double> out;
  for (double c : cuts) {
    const auto it = std::find_if(grid.begin(), grid.end(), [c](double g) { return std::abs(g - c) <= kGridMatchTol; });
    if (it == grid.end()) {
      throw CoverageError(std::string(axis) + " grid does not contain the cut " + format_double(c));
    }
    out.push_back(*it);
  }
  return out;
}

class PanelWriter {
 public:
  PanelWriter(const SweepConfig& cfg, const fs::path& out_dir) : cfg_(cfg), out_dir_(out_dir) {}

  void write(const std::string& name, const std::string& description, const std::vector<std::string>& columns,
             const std::vector<std::vector<double>>& rows) {
    const fs::path path = out_dir_ / (name + ".tsv");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SweepFileError("cannot write " + path.string());
    out << "# scramblesim figure data: " << name << '\n';
    out << "# " << description << '\n';
    out << "# units: hbar = 1, gamma in 1/tau, negativities in log base " << to_string(cfg_.log_base) << '\n';
    std::istringstream lines(cfg_.canonical_text());
    for (std::string line; std::getline(lines, line);) out << "# config: " << line << '\n';
    out << join(columns, '\t') << '\n';
    for (const auto& row : rows) {
      std::vector<std::string> f;
      for (double v : row) f.push_back(format_double(v));
      out << join(f, '\t') << '\n';
    }
    if (!out) throw SweepFileError("write failed for " + path.string());
    written.push_back(path);
  }

  std::vector<fs::path> written;

 private:
  const SweepConfig& cfg_;
  fs::path out_dir_;
};

void require_protocol(const SweepConfig& cfg, EncodingKind kind) {
  if (std::find(cfg.protocols.begin(), cfg.protocols.end(), kind) == cfg.protocols.end()) {
    throw CoverageError("the sweep does not include the " + std::string(to_string(kind)) + " protocol");
  }
}

void heatmap_and_cuts(PanelWriter& w, const RecordIndex& idx, const SweepConfig& cfg, EncodingKind kind,
                      const std::string& prefix, const MetricColumn& metric, char heat_panel, char cut_panel) {
  const auto alphas = cfg.alpha_grid.values();
  const auto gammas = cfg.gamma_grid.values();
  const auto cuts = require_cuts(gammas, kGammaCuts, "gamma");
  const std::string kind_name(to_string(kind));

  std::vector<std::vector<double>> heat;
  for (double a : alphas) {
    for (double g : gammas) heat.push_back({a, g, metric.get(idx.at(kind, a, g).metrics)});
  }
  w.write(prefix + heat_panel + "_" + std::string(metric.name),
          kind_name + ": " + std::string(metric.name) + " over the (alpha, gamma) grid",
          {"alpha", "gamma", std::string(metric.name)}, heat);

  std::vector<std::string> columns{"alpha"};
  for (double c : cuts) columns.push_back(std::string(metric.name) + "@gamma=" + format_double(c));
  std::vector<std::vector<double>> rows;
  for (double a : alphas) {
    std::vector<double> row{a};
    for (double c : cuts) row.push_back(metric.get(idx.at(kind, a, c).metrics));
    rows.push_back(std::move(row));
  }
  w.write(prefix + cut_panel + "_" + std::string(metric.name) + "_cuts",
          kind_name + ": " + std::string(metric.name) + " versus alpha at fixed gamma", columns, rows);
}

void per_gamma_curves(PanelWriter& w, const RecordIndex& idx, const SweepConfig& cfg, EncodingKind kind,
                      const std::string& name, const MetricColumn& metric) {
  const auto alphas = cfg.alpha_grid.values();
  const auto gammas = cfg.gamma_grid.values();
  std::vector<std::string> columns{"alpha"};
  for (double g : gammas) columns.push_back(std::string(metric.name) + "@gamma=" + format_double(g));
  std::vector<std::vector<double>> rows;
  for (double a : alphas) {
    std::vector<double> row{a};
    for (double g : gammas) row.push_back(metric.get(idx.at(kind, a, g).metrics));
    rows.push_back(std::move(row));
  }
  w.write(name, std::string(to_string(kind)) + ": " + std::string(metric.name) + " versus alpha, one column per gamma",
          columns, rows);
}

void per_alpha_curves(PanelWriter& w, const RecordIndex& idx, const SweepConfig& cfg, EncodingKind kind,
                      const std::string& name, const MetricColumn& metric) {
  const auto gammas = cfg.gamma_grid.values();
  const auto cuts = require_cuts(cfg.alpha_grid.values(), kAlphaCuts, "alpha");
  std::vector<std::string> columns{"gamma"};
  for (double a : cuts) columns.push_back(std::string(metric.name) + "@alpha=" + format_double(a));
  std::vector<std::vector<double>> rows;
  for (double g : gammas) {
    std::vector<double> row{g};
    for (double a : cuts) row.push_back(metric.get(idx.at(kind, a, g).metrics));
    rows.push_back(std::move(row));
  }
  w.write(name, std::string(to_string(kind)) + ": " + std::string(metric.name) + " versus gamma at fixed alpha",
          columns, rows);
}

}  // namespace

std::vector<fs::path> emit_figure_data(const std::vector<SweepRecord>& records, FigureId figure,
                                       const SweepConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const RecordIndex idx(records);
  PanelWriter w(cfg, out_dir);
  switch (figure) {
    case FigureId::Fig2:
    case FigureId::Fig3: {
      const EncodingKind kind = figure == FigureId::Fig2 ? EncodingKind::Scrambling : EncodingKind::Swap;
      require_protocol(cfg, kind);
      const std::string prefix(to_string(figure));
      heatmap_and_cuts(w, idx, cfg, kind, prefix, kFidelity, 'a', 'b');
      heatmap_and_cuts(w, idx, cfg, kind, prefix, kPurity, 'c', 'd');
      heatmap_and_cuts(w, idx, cfg, kind, prefix, kNegCut, 'e', 'f');
      break;
    }
    case FigureId::Fig4:
      require_protocol(cfg, EncodingKind::Scrambling);
      require_protocol(cfg, EncodingKind::Swap);
      per_gamma_curves(w, idx, cfg, EncodingKind::Scrambling, "fig4a_delta_E_U", kDeltaU);
      per_gamma_curves(w, idx, cfg, EncodingKind::Swap, "fig4b_delta_E_U", kDeltaU);
      per_gamma_curves(w, idx, cfg, EncodingKind::Scrambling, "fig4c_delta_E_M", kDeltaM);
      per_gamma_curves(w, idx, cfg, EncodingKind::Swap, "fig4d_delta_E_M", kDeltaM);
      break;
    case FigureId::Fig7:
      require_protocol(cfg, EncodingKind::Scrambling);
      require_protocol(cfg, EncodingKind::Swap);
      per_alpha_curves(w, idx, cfg, EncodingKind::Scrambling, "fig7a_fidelity_avg", kFidelity);
      per_alpha_curves(w, idx, cfg, EncodingKind::Scrambling, "fig7b_purity_avg", kPurity);
      per_alpha_curves(w, idx, cfg, EncodingKind::Swap, "fig7c_fidelity_avg", kFidelity);
      per_alpha_curves(w, idx, cfg, EncodingKind::Swap, "fig7d_purity_avg", kPurity);
      break;
  }
  return w.written;
}

}  // namespace scramblesim
