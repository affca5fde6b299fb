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

#include <string>
#include <string_view>
#include <vector>

#include "scramblesim/protocol.hpp"
#include "scramblesim/tensor_core.hpp"

namespace scramblesim {

/// Base of the logarithm in E_N = log(1 + 2 N). Base 2 makes a Bell pair
/// worth exactly one unit.
enum class LogBase { Two, E };

[[nodiscard]] std::string_view to_string(LogBase b);
[[nodiscard]] LogBase parse_log_base(std::string_view text);

/// What "total entanglement" sums over.
///  - ContiguousCuts: E_N across the six cuts 1..k | k+1..7.
///  - NeighborPairs: E_N of the reduced two-qubit state of each (k, k+1).
enum class TotalNegativityMode { ContiguousCuts, NeighborPairs };

[[nodiscard]] std::string_view to_string(TotalNegativityMode m);
[[nodiscard]] TotalNegativityMode parse_total_negativity_mode(std::string_view text);

/// Eigenvalues of rho^{T_B} below this magnitude are treated as zero.
inline constexpr double kNegativityCutoff = 1e-12;

/// <phi| rho |phi> for a single-qubit state.
[[nodiscard]] double fidelity(const DensityMatrix& rho1, const InputState& phi);

/// Tr rho^2.
[[nodiscard]] double purity(const DensityMatrix& rho);
[[nodiscard]] double purity(const ComplexMatrix& rho);

/// sum over negative eigenvalues |lambda| of rho^{T_B}.
[[nodiscard]] double negativity(const DensityMatrix& rho, const QubitSubset& subsystem_b);

[[nodiscard]] double log_negativity(const DensityMatrix& rho, const QubitSubset& subsystem_b,
                                    LogBase base = LogBase::Two);

[[nodiscard]] double total_negativity(const DensityMatrix& rho, LogBase base = LogBase::Two,
                                      TotalNegativityMode mode = TotalNegativityMode::ContiguousCuts);

struct MetricsOptions {
  LogBase log_base = LogBase::Two;
  TotalNegativityMode total_mode = TotalNegativityMode::ContiguousCuts;
};

enum class DeltaKind { Unitary, Measurement };

/// Unitary: E_tot(t2) - E_tot(t1). Measurement: E_tot(t3) - E_tot(t2) with
/// t3 the renormalized post-projection state.
[[nodiscard]] double delta_E(const Trajectory& traj, DeltaKind which, const MetricsOptions& opts = {});

/// Scalar observables of one input run.
struct RunMetrics {
  double fidelity = 0.0;
  double purity = 0.0;
  double neg_cut34 = 0.0;
  double neg_total_t1 = 0.0;
  double neg_total_t2 = 0.0;
  double neg_total_t3 = 0.0;
  double success_probability = 0.0;
};

[[nodiscard]] RunMetrics evaluate_run(const Trajectory& traj, const InputState& phi, const MetricsOptions& opts = {});

struct MetricsRecord {
  double fidelity_avg = 0.0;
  double purity_avg = 0.0;
  /// Tr((mean_phi rho_phi)^2), kept for comparison with purity_avg.
  double purity_of_mean = 0.0;
  double neg_cut34 = 0.0;
  double neg_total_t1 = 0.0;
  double neg_total_t2 = 0.0;
  double neg_total_t3 = 0.0;
  double delta_E_U = 0.0;
  double delta_E_M = 0.0;
  double success_prob_avg = 0.0;
  /// Labels of inputs whose postselection was impossible.
  std::vector<std::string> excluded_inputs;

  /// Finite values, purity in [1/128, 1 + 1e-9], negativities >= 0.
  void validate() const;
};

struct AverageConfig {
  RunConfig run;
  MetricsOptions metrics;
  /// Evolve the three source-qubit basis operators once and combine them,
  /// instead of evolving each of the six inputs.
  bool operator_basis = true;
};

/// Six-input average. Inputs whose postselection is impossible are listed
/// in excluded_inputs and left out of the means; if every input fails the
/// PostselectionError is rethrown.
[[nodiscard]] MetricsRecord average_over_inputs(EncodingKind kind, double alpha, double gamma,
                                                const AverageConfig& cfg = {});

}  // namespace scramblesim
