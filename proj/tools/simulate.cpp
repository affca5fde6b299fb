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

// simulate --config <path> [--figure fig2|fig3|fig4|fig7] [--out <dir>] [--resume]
//
// Runs the configured sweep (resuming a partial output file on request) and
// optionally writes the panel files of one figure. Failures end with a
// single line on stderr:
//   error category=<config|sweep_file|coverage|usage|internal> [line=N field=F] message="..."

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scramblesim/sweep.hpp"

namespace {

namespace fs = std::filesystem;
using namespace scramblesim;

enum ExitCode { kOk = 0, kInternal = 1, kUsage = 2, kConfig = 3, kSweepFile = 4, kCoverage = 5 };

std::string quoted(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += (c == '\n' || c == '\t') ? ' ' : c;
  }
  return out + '"';
}

int fail(std::string_view category, std::string_view message, int code, const std::string& extra = {}) {
  std::cerr << "error category=" << category << extra << " message=" << quoted(message) << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density-matrix sweeps of the noisy scrambling and SWAP teleportation circuits"};
  std::string config_path;
  std::string figure;
  std::string out_dir;
  bool resume = false;
  app.add_option("--config", config_path, "key = value sweep configuration")->required();
  app.add_option("--figure", figure, "emit the panel files of one figure")
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig7"}));
  app.add_option("--out", out_dir, "directory for the sweep file and figure data");
  app.add_flag("--resume", resume, "keep complete rows of an existing output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kUsage);
  }

  try {
    SweepConfig cfg = load_config(config_path);
    if (resume) cfg.resume = true;
    if (!out_dir.empty()) cfg.output_path = (fs::path(out_dir) / fs::path(cfg.output_path).filename()).string();

    std::cerr << "sweep: " << cfg.row_count() << " rows -> " << cfg.output_path << '\n';
    const auto records = run_sweep(cfg);
    std::size_t failed = 0;
    for (const auto& r : records) failed += r.error.empty() ? 0 : 1;
    std::cerr << "sweep: done, " << failed << " failed rows\n";

    if (!figure.empty()) {
      const fs::path fig_dir = !out_dir.empty() ? fs::path(out_dir) : fs::path(cfg.output_path).parent_path();
      for (const auto& p : emit_figure_data(records, parse_figure_id(figure), cfg, fig_dir.empty() ? "." : fig_dir)) {
        std::cout << p.string() << '\n';
      }
    }
  } catch (const ConfigError& e) {
    return fail("config", e.what(), kConfig,
                " line=" + std::to_string(e.line()) + " field=" + (e.field().empty() ? "-" : e.field()));
  } catch (const SweepFileError& e) {
    return fail("sweep_file", e.what(), kSweepFile);
  } catch (const CoverageError& e) {
    return fail("coverage", e.what(), kCoverage);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kInternal);
  }
  return kOk;
}
