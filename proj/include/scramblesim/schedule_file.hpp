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

// Line-oriented circuit transcription format:
//
//   # comment
//   MARK t1 2
//   GATE <name> SITES <i[,j]> START <t> DUR <tau> [PARAM <expr(alpha)>]
//
// <name> is one of XX, RZ, CNOT, HAD, PSWAP. PARAM is a linear expression in
// `alpha` built from numbers, `pi`, `alpha`, * and /, joined by + and -.
// For PSWAP the parameter is the signed exponent of ln SWAP.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scramblesim/gates.hpp"

namespace scramblesim {

class ScheduleParseError : public std::runtime_error {
 public:
  ScheduleParseError(int line, const std::string& message);
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

/// c0 + c1 * alpha.
struct LinearExpr {
  double constant = 0.0;
  double alpha_coeff = 0.0;

  [[nodiscard]] double eval(double alpha) const { return constant + alpha_coeff * alpha; }
  [[nodiscard]] LinearExpr negated() const { return {-constant, -alpha_coeff}; }
};

/// Throws std::invalid_argument on malformed or non-linear input.
[[nodiscard]] LinearExpr parse_linear_expr(std::string_view text);

enum class GateKind { XX, RZ, CNOT, HAD, PSWAP };

[[nodiscard]] std::string_view to_string(GateKind kind);

struct GateLine {
  GateKind kind = GateKind::XX;
  std::vector<int> sites;
  double start = 0.0;
  double duration = 1.0;
  LinearExpr param;
  int line = 0;

  /// Concrete segment at the given alpha.
  [[nodiscard]] GateSegment instantiate(double alpha) const;
  /// Segment of the complex-conjugate gate (negated rotation).
  [[nodiscard]] GateSegment instantiate_conjugate(double alpha) const;
};

struct ScheduleTranscription {
  std::vector<GateLine> gates;
  std::map<std::string, double> marks;

  [[nodiscard]] double mark(const std::string& name) const;
};

[[nodiscard]] ScheduleTranscription parse_schedule_text(std::string_view text);
[[nodiscard]] ScheduleTranscription load_schedule_file(const std::filesystem::path& path);

/// Contents of schedules/<kind>.sched compiled into the library.
[[nodiscard]] std::string_view builtin_schedule_text(EncodingKind kind);
[[nodiscard]] const ScheduleTranscription& builtin_schedule(EncodingKind kind);
[[nodiscard]] std::string schedule_file_name(EncodingKind kind);

}  // namespace scramblesim
