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

// The 7-qubit teleportation protocol: Bell-pair creation on [0, t1],
// encoding/decoding on [t1, t2], Bell-measurement rotation on [t2, t3],
// then a heralded projection onto the measured pair reading |00>.

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scramblesim/evolution.hpp"
#include "scramblesim/gates.hpp"
#include "scramblesim/schedule_file.hpp"

namespace scramblesim {

inline constexpr int kProtocolQubits = 7;
inline constexpr int kTargetQubit = 7;

/// Pair whose Bell measurement heralds the teleportation; (3, 4) in the
/// standard circuit. Measuring (1, 6) or (2, 5) probes the scrambler.
struct MeasuredPair {
  int first = 3;
  int second = 4;
  friend bool operator==(const MeasuredPair&, const MeasuredPair&) = default;
};

struct ProtocolSchedule {
  EncodingKind kind = EncodingKind::Scrambling;
  double alpha = 0.0;
  std::vector<GateSegment> segments;
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  MeasuredPair measured;

  /// Checks 0 < t1 < t2 < t3, segment windows inside [0, t3] and that no
  /// two concurrent segments share a qubit.
  void validate() const;
};

/// Builds the schedule from a transcription (the checked-in one when null).
[[nodiscard]] ProtocolSchedule build_schedule(EncodingKind kind, double alpha, MeasuredPair measured = {},
                                              const ScheduleTranscription* transcription = nullptr);

struct InputState {
  std::string label;
  Eigen::Vector2cd vector;

  /// X+, X-, Y+, Y-, Z+, Z-.
  static const std::array<InputState, 6>& pauli_eigenstates();
};

/// |phi><phi| on qubit 1, |0><0| on qubits 2..7.
[[nodiscard]] DensityMatrix initial_state(const InputState& phi);

class PostselectionError : public std::runtime_error {
 public:
  PostselectionError(double probability, const std::string& message)
      : std::runtime_error(message), probability_(probability) {}
  [[nodiscard]] double probability() const { return probability_; }

 private:
  double probability_;
};

inline constexpr double kMinSuccessProbability = 1e-12;

struct MeasurementOutcome {
  DensityMatrix post_state;
  double success_probability;
};

/// Diagonal projector onto the measured pair reading |00> after the CNOT/HAD
/// rotation, i.e. the image of |Phi+>.
[[nodiscard]] Eigen::VectorXd measurement_projector_diagonal(MeasuredPair pair, int n = kProtocolQubits);

/// P rho P / Tr(P rho P). Throws PostselectionError when Tr(P rho P) < 1e-12.
[[nodiscard]] MeasurementOutcome bell_measurement(const DensityMatrix& rho, MeasuredPair pair = {});

struct Trajectory {
  DensityMatrix rho_t1;
  DensityMatrix rho_t2;
  DensityMatrix rho_t3;  // before the projection
  MeasurementOutcome outcome;
};

struct RunConfig {
  EvolutionConfig evolution;
  RateConvention rate_convention = RateConvention::Kraus;
  MeasuredPair measured;
  /// Optional schedule override per kind; the checked-in files otherwise.
  std::shared_ptr<const ScheduleTranscription> scrambling_schedule;
  std::shared_ptr<const ScheduleTranscription> swap_schedule;

  [[nodiscard]] const ScheduleTranscription* transcription(EncodingKind kind) const;
};

/// Deterministic run for one input state.
[[nodiscard]] Trajectory run_protocol(EncodingKind kind, double alpha, double gamma, const InputState& phi,
                                      const RunConfig& cfg = {});
[[nodiscard]] Trajectory run_protocol(const ProtocolSchedule& schedule, const NoiseModel& noise,
                                      const InputState& phi, const EvolutionConfig& cfg);

/// Unnormalized checkpoint operators of one evolution (pre-projection).
struct OperatorCheckpoints {
  ComplexMatrix t1;
  ComplexMatrix t2;
  ComplexMatrix t3;
};

/// Runs the protocol on the operator basis |a><b| (x) |0..0><0..0| of the
/// source qubit. Because the evolution is linear, the checkpoints of any
/// input state follow as sum_ab phi_a conj(phi_b) E_ab; |1><0| is the
/// adjoint of |0><1| and is not evolved separately.
class OperatorBasisRun {
 public:
  OperatorBasisRun(const ProtocolSchedule& schedule, const NoiseModel& noise, const EvolutionConfig& cfg);

  /// Trajectory of the given input; throws PostselectionError like
  /// run_protocol.
  [[nodiscard]] Trajectory trajectory(const InputState& phi) const;

 private:
  [[nodiscard]] ComplexMatrix combine(const Eigen::Vector2cd& phi, int checkpoint) const;

  MeasuredPair measured_;
  // basis_[k] for E_00, E_11, E_01.
  std::array<OperatorCheckpoints, 3> basis_;
};

}  // namespace scramblesim
