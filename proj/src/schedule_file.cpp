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

#include "scramblesim/schedule_file.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace scramblesim {

// Defined in the generated builtin_schedules.cpp.
extern const char* const kBuiltinScramblingSchedule;
extern const char* const kBuiltinSwapSchedule;

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  LinearExpr parse() {
    LinearExpr value = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  LinearExpr parse_sum() {
    LinearExpr acc = parse_product();
    for (;;) {
      skip_space();
      if (consume('+')) {
        const LinearExpr rhs = parse_product();
        acc = {acc.constant + rhs.constant, acc.alpha_coeff + rhs.alpha_coeff};
      } else if (consume('-')) {
        const LinearExpr rhs = parse_product();
        acc = {acc.constant - rhs.constant, acc.alpha_coeff - rhs.alpha_coeff};
      } else {
        return acc;
      }
    }
  }

  LinearExpr parse_product() {
    LinearExpr acc = parse_factor();
    for (;;) {
      skip_space();
      if (consume('*')) {
        const LinearExpr rhs = parse_factor();
        if (acc.alpha_coeff != 0.0 && rhs.alpha_coeff != 0.0) fail("expression is not linear in alpha");
        acc = {acc.constant * rhs.constant,
               acc.alpha_coeff * rhs.constant + acc.constant * rhs.alpha_coeff};
      } else if (consume('/')) {
        const LinearExpr rhs = parse_factor();
        if (rhs.alpha_coeff != 0.0) fail("division by an alpha-dependent term");
        if (rhs.constant == 0.0) fail("division by zero");
        acc = {acc.constant / rhs.constant, acc.alpha_coeff / rhs.constant};
      } else {
        return acc;
      }
    }
  }

  LinearExpr parse_factor() {
    skip_space();
    if (consume('-')) return parse_factor().negated();
    if (consume('+')) return parse_factor();
    if (consume('(')) {
      LinearExpr inner = parse_sum();
      skip_space();
      if (!consume(')')) fail("missing ')'");
      return inner;
    }
    if (match_word("pi")) return {std::numbers::pi, 0.0};
    if (match_word("alpha")) return {0.0, 1.0};
    double v = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr == begin) fail("expected a number, 'pi' or 'alpha'");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return {v, 0.0};
  }

  bool match_word(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) return false;
    const std::size_t after = pos_ + word.size();
    if (after < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_')) {
      return false;
    }
    pos_ = after;
    return true;
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("bad expression '" + std::string(text_) + "': " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double parse_number(const std::string& token, int line, const char* what) {
  LinearExpr e;
  try {
    e = parse_linear_expr(token);
  } catch (const std::exception&) {
    throw ScheduleParseError(line, std::string("bad ") + what + " '" + token + "'");
  }
  if (e.alpha_coeff != 0.0) throw ScheduleParseError(line, std::string(what) + " may not depend on alpha");
  return e.constant;
}

GateKind parse_gate_kind(const std::string& name, int line) {
  if (name == "XX") return GateKind::XX;
  if (name == "RZ") return GateKind::RZ;
  if (name == "CNOT") return GateKind::CNOT;
  if (name == "HAD") return GateKind::HAD;
  if (name == "PSWAP") return GateKind::PSWAP;
  throw ScheduleParseError(line, "unknown gate '" + name + "'");
}

std::vector<int> parse_sites(const std::string& token, int line) {
  std::vector<int> sites;
  std::stringstream ss(token);
  std::string part;
  while (std::getline(ss, part, ',')) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size()) {
      throw ScheduleParseError(line, "bad site list '" + token + "'");
    }
    sites.push_back(v);
  }
  return sites;
}

std::size_t arity(GateKind kind) {
  switch (kind) {
    case GateKind::RZ:
    case GateKind::HAD:
      return 1;
    default:
      return 2;
  }
}

ComplexMatrix generator_for(GateKind kind, double param, double tau) {
  switch (kind) {
    case GateKind::XX:
      return xx_generator(param, tau);
    case GateKind::RZ:
      return rz_generator(param, tau);
    case GateKind::CNOT:
      return cnot_generator(tau);
    case GateKind::HAD:
      return hadamard_generator(tau);
    case GateKind::PSWAP:
      return param_swap_generator(param, tau);
  }
  throw std::logic_error("unreachable gate kind");
}

}  // namespace

ScheduleParseError::ScheduleParseError(int line, const std::string& message)
    : std::runtime_error("schedule line " + std::to_string(line) + ": " + message), line_(line) {}

LinearExpr parse_linear_expr(std::string_view text) { return ExprParser(text).parse(); }

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::XX:
      return "XX";
    case GateKind::RZ:
      return "RZ";
    case GateKind::CNOT:
      return "CNOT";
    case GateKind::HAD:
      return "HAD";
    case GateKind::PSWAP:
      return "PSWAP";
  }
  return "?";
}

GateSegment GateLine::instantiate(double alpha) const {
  return GateSegment{std::string(to_string(kind)), generator_for(kind, param.eval(alpha), duration),
                     QubitSubset(sites), start, duration};
}

GateSegment GateLine::instantiate_conjugate(double alpha) const {
  // XX, RZ and PSWAP are real-coefficient exponentials of i times a real
  // matrix, so complex conjugation negates the rotation.
  if (kind == GateKind::CNOT || kind == GateKind::HAD) {
    throw std::invalid_argument("instantiate_conjugate: only XX, RZ and PSWAP rotations");
  }
  return GateSegment{std::string(to_string(kind)) + "*",
                     generator_for(kind, -param.eval(alpha), duration), QubitSubset(sites), start,
                     duration};
}

double ScheduleTranscription::mark(const std::string& name) const {
  auto it = marks.find(name);
  if (it == marks.end()) throw std::out_of_range("schedule has no MARK " + name);
  return it->second;
}

ScheduleTranscription parse_schedule_text(std::string_view text) {
  ScheduleTranscription out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (tok[0] == "MARK") {
      if (tok.size() != 3) throw ScheduleParseError(line_no, "MARK expects a name and a time");
      out.marks[tok[1]] = parse_number(tok[2], line_no, "time");
      continue;
    }
    if (tok[0] != "GATE") throw ScheduleParseError(line_no, "unknown directive '" + tok[0] + "'");
    if (tok.size() < 2) throw ScheduleParseError(line_no, "GATE without a name");

    GateLine g;
    g.line = line_no;
    g.kind = parse_gate_kind(tok[1], line_no);
    bool have_sites = false, have_start = false, have_dur = false, have_param = false;
    std::size_t i = 2;
    while (i < tok.size()) {
      const std::string& key = tok[i];
      if (key == "PARAM") {
        // The expression may contain spaces; it runs to the end of the line.
        std::string expr;
        for (std::size_t j = i + 1; j < tok.size(); ++j) expr += tok[j];
        if (expr.empty()) throw ScheduleParseError(line_no, "PARAM without an expression");
        try {
          g.param = parse_linear_expr(expr);
        } catch (const std::invalid_argument& e) {
          throw ScheduleParseError(line_no, e.what());
        }
        have_param = true;
        break;
      }
      if (i + 1 >= tok.size()) throw ScheduleParseError(line_no, key + " without a value");
      const std::string& val = tok[i + 1];
      if (key == "SITES") {
        g.sites = parse_sites(val, line_no);
        have_sites = true;
      } else if (key == "START") {
        g.start = parse_number(val, line_no, "START");
        have_start = true;
      } else if (key == "DUR") {
        g.duration = parse_number(val, line_no, "DUR");
        have_dur = true;
      } else {
        throw ScheduleParseError(line_no, "unknown field '" + key + "'");
      }
      i += 2;
    }
    if (!have_sites || !have_start || !have_dur) {
      throw ScheduleParseError(line_no, "GATE needs SITES, START and DUR");
    }
    if (g.sites.size() != arity(g.kind)) {
      throw ScheduleParseError(line_no, std::string(to_string(g.kind)) + " acts on " +
                                            std::to_string(arity(g.kind)) + " site(s)");
    }
    try {
      (void)QubitSubset(g.sites);
    } catch (const std::invalid_argument& e) {
      throw ScheduleParseError(line_no, e.what());
    }
    if (!(g.duration > 0.0)) throw ScheduleParseError(line_no, "DUR must be positive");
    if (g.start < 0.0) throw ScheduleParseError(line_no, "START must be non-negative");
    const bool needs_param = g.kind == GateKind::XX || g.kind == GateKind::RZ || g.kind == GateKind::PSWAP;
    if (needs_param && !have_param) throw ScheduleParseError(line_no, "gate needs PARAM");
    out.gates.push_back(std::move(g));
  }
  return out;
}

ScheduleTranscription load_schedule_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schedule file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_schedule_text(ss.str());
}

std::string_view builtin_schedule_text(EncodingKind kind) {
  return kind == EncodingKind::Scrambling ? kBuiltinScramblingSchedule : kBuiltinSwapSchedule;
}

const ScheduleTranscription& builtin_schedule(EncodingKind kind) {
  static const ScheduleTranscription scrambling =
      parse_schedule_text(builtin_schedule_text(EncodingKind::Scrambling));
  static const ScheduleTranscription swap = parse_schedule_text(builtin_schedule_text(EncodingKind::Swap));
  return kind == EncodingKind::Scrambling ? scrambling : swap;
}

std::string schedule_file_name(EncodingKind kind) { return std::string(to_string(kind)) + ".sched"; }

}  // namespace scramblesim
