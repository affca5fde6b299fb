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

// First-order Trotter stepping of the dephasing master equation: each time
// bin applies the gate unitaries active in that bin, then the per-qubit
// dephasing Kraus channel on every qubit.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "scramblesim/gates.hpp"
#include "scramblesim/tensor_core.hpp"

namespace scramblesim {

/// How gamma maps onto the per-step Kraus pair.
///  - Kraus: K1 = 1 + n (e^{-gamma dt} - 1), K2 = sqrt(1 - e^{-2 gamma dt}) n;
///    coherences decay as e^{-gamma t}.
///  - Lindblad: rate of the jump operator n in the master equation, which
///    decays coherences as e^{-gamma t / 2} (the Kraus pair at gamma / 2).
enum class RateConvention { Kraus, Lindblad };

[[nodiscard]] std::string_view to_string(RateConvention c);
[[nodiscard]] RateConvention parse_rate_convention(std::string_view text);

struct NoiseModel {
  double gamma = 0.0;
  RateConvention convention = RateConvention::Kraus;

  /// The gamma that enters the Kraus pair.
  [[nodiscard]] double kraus_rate() const;
  /// n_i = (1 + Z_i) / 2 as a 2x2 operator.
  [[nodiscard]] static ComplexMatrix jump_operator();
  void validate() const;
};

struct EvolutionConfig {
  double dt = 0.01;
};

struct KrausPair {
  ComplexMatrix k1;
  ComplexMatrix k2;

  /// max |K1^dag K1 + K2^dag K2 - 1|.
  [[nodiscard]] double completeness_error() const;
};

[[nodiscard]] KrausPair dephasing_kraus(double gamma, double dt);

/// rho <- sum_j K_j rho K_j^dag for the pair acting on one site.
void apply_single_qubit_kraus(ComplexMatrix& rho, int n, const KrausPair& kraus, int site);

/// Product over all n qubits of the single-site dephasing channel. The Kraus
/// pair is diagonal, so the composed map is an entrywise multiplier that is
/// built once and reused across steps.
class DephasingChannel {
 public:
  DephasingChannel(int n, const NoiseModel& noise, double dt);

  void apply(ComplexMatrix& rho) const;
  [[nodiscard]] const KrausPair& kraus() const { return kraus_; }
  [[nodiscard]] bool is_identity() const { return identity_; }

 private:
  int n_;
  KrausPair kraus_;
  bool identity_;
  Eigen::MatrixXd factors_;
};

[[nodiscard]] ComplexMatrix dissipative_step(const ComplexMatrix& rho, int n, const NoiseModel& noise,
                                             double dt);
[[nodiscard]] DensityMatrix dissipative_step(const DensityMatrix& rho, const NoiseModel& noise, double dt);

/// rho <- U rho U^dag with U the product of exp(-i H_seg dt) over the given
/// segments. Throws std::invalid_argument when two segments share a site.
[[nodiscard]] ComplexMatrix unitary_step(const ComplexMatrix& rho, int n,
                                         std::span<const GateSegment> active, double dt);
[[nodiscard]] DensityMatrix unitary_step(const DensityMatrix& rho, std::span<const GateSegment> active,
                                         double dt);

/// Time stepper for one fixed segment list. Step unitaries and the dephasing
/// multiplier are computed once at construction; evolve() is const and may
/// be called concurrently on distinct states.
class Evolver {
 public:
  Evolver(int n, std::vector<GateSegment> segments, const NoiseModel& noise, const EvolutionConfig& cfg);

  /// Evolves any operator (not only states) from t_from to t_to; both must
  /// lie on the step grid. The map is linear in rho.
  void evolve(ComplexMatrix& rho, double t_from, double t_to) const;
  [[nodiscard]] DensityMatrix evolve(const DensityMatrix& rho, double t_from, double t_to) const;

  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] int num_qubits() const { return n_; }
  [[nodiscard]] const std::vector<GateSegment>& segments() const { return segments_; }
  /// Indices of segments active in bin [k dt, (k + 1) dt).
  [[nodiscard]] std::vector<std::size_t> active_in_bin(long long bin) const;

 private:
  struct StepOp {
    bool diagonal = false;
    Eigen::VectorXcd full_phases;                 // length 2^n, when diagonal
    std::optional<LocalConjugation> conjugation;  // otherwise
  };

  [[nodiscard]] long long to_bin(double t, const char* what) const;
  void apply_step_ops(ComplexMatrix& rho, long long bin) const;

  int n_;
  double dt_;
  std::vector<GateSegment> segments_;
  std::vector<long long> first_bin_, end_bin_;
  std::vector<StepOp> ops_;
  DephasingChannel dephasing_;
};

[[nodiscard]] DensityMatrix evolve(const DensityMatrix& rho, std::span<const GateSegment> segments,
                                   const NoiseModel& noise, const EvolutionConfig& cfg, double t_from,
                                   double t_to);

}  // namespace scramblesim
