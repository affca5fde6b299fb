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

#include "scramblesim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace scramblesim {

namespace {

constexpr double kTimeTol = 1e-9;

int remap_measured_site(int site, MeasuredPair pair) {
  if (site == 3) return pair.first;
  if (site == 4) return pair.second;
  throw std::invalid_argument("measurement segment acts outside the (3,4) template");
}

ComplexMatrix source_operator(int a, int b) {
  ComplexMatrix rest = ComplexMatrix::Zero(64, 64);
  rest(0, 0) = 1.0;
  ComplexMatrix e = ComplexMatrix::Zero(2, 2);
  e(a, b) = 1.0;
  return kron(e, rest);
}

MeasurementOutcome project(const ComplexMatrix& rho, MeasuredPair pair) {
  const Eigen::VectorXd p = measurement_projector_diagonal(pair, qubits_for_dim(rho.rows()));
  ComplexMatrix projected = p.cast<Complex>().asDiagonal() * rho * p.cast<Complex>().asDiagonal();
  const double prob = projected.trace().real();
  if (!(prob >= kMinSuccessProbability)) {
    std::ostringstream os;
    os << "postselection impossible: success probability " << prob << " below " << kMinSuccessProbability;
    throw PostselectionError(prob, os.str());
  }
  projected /= prob;
  // Clean rounding-level anti-Hermitian parts before the invariant check.
  projected = (0.5 * (projected + projected.adjoint())).eval();
  return MeasurementOutcome{DensityMatrix(qubits_for_dim(rho.rows()), std::move(projected)), prob};
}

DensityMatrix as_state(const ComplexMatrix& m) {
  return DensityMatrix(qubits_for_dim(m.rows()), (0.5 * (m + m.adjoint())).eval());
}

}  // namespace

void ProtocolSchedule::validate() const {
  if (!(0.0 < t1 && t1 < t2 && t2 < t3)) throw std::invalid_argument("schedule needs 0 < t1 < t2 < t3");
  for (const auto& seg : segments) {
    if (seg.start < -kTimeTol || seg.end() > t3 + kTimeTol) {
      throw std::invalid_argument("segment '" + seg.label + "' lies outside [0, t3]");
    }
    seg.sites.check_within(kProtocolQubits);
    if (hermiticity_error(seg.generator) > 1e-12) {
      throw std::invalid_argument("segment '" + seg.label + "' has a non-Hermitian generator");
    }
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    for (std::size_t j = i + 1; j < segments.size(); ++j) {
      const auto& a = segments[i];
      const auto& b = segments[j];
      const bool concurrent = a.start < b.end() - kTimeTol && b.start < a.end() - kTimeTol;
      if (!concurrent) continue;
      for (int s : a.sites.sites()) {
        if (b.sites.contains(s)) {
          throw std::invalid_argument("segments '" + a.label + "' and '" + b.label +
                                      "' act on qubit " + std::to_string(s) + " at the same time");
        }
      }
    }
  }
}

ProtocolSchedule build_schedule(EncodingKind kind, double alpha, MeasuredPair measured,
                                const ScheduleTranscription* transcription) {
  check_alpha(alpha);
  const ScheduleTranscription& src = transcription ? *transcription : builtin_schedule(kind);
  ProtocolSchedule s;
  s.kind = kind;
  s.alpha = alpha;
  s.t1 = src.mark("t1");
  s.t2 = src.mark("t2");
  s.t3 = src.mark("t3");
  s.measured = measured;
  if (!(measured.first >= 1 && measured.first < measured.second && measured.second <= kProtocolQubits)) {
    throw std::invalid_argument("measured pair must satisfy 1 <= first < second <= 7");
  }
  for (const auto& line : src.gates) {
    GateSegment seg = line.instantiate(alpha);
    if (line.start >= s.t2 - kTimeTol && !(measured == MeasuredPair{})) {
      std::vector<int> sites;
      for (int q : seg.sites.sites()) sites.push_back(remap_measured_site(q, measured));
      seg.sites = QubitSubset(std::move(sites));
    }
    s.segments.push_back(std::move(seg));
  }
  std::stable_sort(s.segments.begin(), s.segments.end(),
                   [](const GateSegment& a, const GateSegment& b) { return a.start < b.start; });
  s.validate();
  return s;
}

const std::array<InputState, 6>& InputState::pauli_eigenstates() {
  static const std::array<InputState, 6> states = [] {
    const double h = std::numbers::sqrt2 / 2.0;
    const Complex i{0.0, 1.0};
    return std::array<InputState, 6>{
        InputState{"X+", Eigen::Vector2cd(h, h)},      InputState{"X-", Eigen::Vector2cd(h, -h)},
        InputState{"Y+", Eigen::Vector2cd(h, i * h)},  InputState{"Y-", Eigen::Vector2cd(h, -i * h)},
        InputState{"Z+", Eigen::Vector2cd(1.0, 0.0)},  InputState{"Z-", Eigen::Vector2cd(0.0, 1.0)},
    };
  }();
  return states;
}

DensityMatrix initial_state(const InputState& phi) {
  if (std::abs(phi.vector.norm() - 1.0) > 1e-12) throw std::invalid_argument("input state is not normalized");
  ComplexMatrix rest = ComplexMatrix::Zero(64, 64);
  rest(0, 0) = 1.0;
  return DensityMatrix(kProtocolQubits, kron(phi.vector * phi.vector.adjoint(), rest));
}

Eigen::VectorXd measurement_projector_diagonal(MeasuredPair pair, int n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  const Eigen::Index mask = (Eigen::Index{1} << (n - pair.first)) | (Eigen::Index{1} << (n - pair.second));
  Eigen::VectorXd p(d);
  for (Eigen::Index b = 0; b < d; ++b) p(b) = (b & mask) ? 0.0 : 1.0;
  return p;
}

MeasurementOutcome bell_measurement(const DensityMatrix& rho, MeasuredPair pair) {
  return project(rho.matrix(), pair);
}

const ScheduleTranscription* RunConfig::transcription(EncodingKind kind) const {
  return kind == EncodingKind::Scrambling ? scrambling_schedule.get() : swap_schedule.get();
}

Trajectory run_protocol(const ProtocolSchedule& schedule, const NoiseModel& noise, const InputState& phi,
                        const EvolutionConfig& cfg) {
  const Evolver evolver(kProtocolQubits, schedule.segments, noise, cfg);
  ComplexMatrix rho = initial_state(phi).matrix();
  evolver.evolve(rho, 0.0, schedule.t1);
  DensityMatrix r1 = as_state(rho);
  evolver.evolve(rho, schedule.t1, schedule.t2);
  DensityMatrix r2 = as_state(rho);
  evolver.evolve(rho, schedule.t2, schedule.t3);
  DensityMatrix r3 = as_state(rho);
  MeasurementOutcome outcome = project(r3.matrix(), schedule.measured);
  return Trajectory{std::move(r1), std::move(r2), std::move(r3), std::move(outcome)};
}

Trajectory run_protocol(EncodingKind kind, double alpha, double gamma, const InputState& phi,
                        const RunConfig& cfg) {
  const ProtocolSchedule schedule = build_schedule(kind, alpha, cfg.measured, cfg.transcription(kind));
  return run_protocol(schedule, NoiseModel{gamma, cfg.rate_convention}, phi, cfg.evolution);
}

OperatorBasisRun::OperatorBasisRun(const ProtocolSchedule& schedule, const NoiseModel& noise,
                                   const EvolutionConfig& cfg)
    : measured_(schedule.measured) {
  const Evolver evolver(kProtocolQubits, schedule.segments, noise, cfg);
  constexpr std::array<std::pair<int, int>, 3> kBasis{{{0, 0}, {1, 1}, {0, 1}}};
  for (std::size_t k = 0; k < kBasis.size(); ++k) {
    ComplexMatrix rho = source_operator(kBasis[k].first, kBasis[k].second);
    evolver.evolve(rho, 0.0, schedule.t1);
    basis_[k].t1 = rho;
    evolver.evolve(rho, schedule.t1, schedule.t2);
    basis_[k].t2 = rho;
    evolver.evolve(rho, schedule.t2, schedule.t3);
    basis_[k].t3 = std::move(rho);
  }
}

ComplexMatrix OperatorBasisRun::combine(const Eigen::Vector2cd& phi, int checkpoint) const {
  auto pick = [checkpoint](const OperatorCheckpoints& c) -> const ComplexMatrix& {
    return checkpoint == 1 ? c.t1 : checkpoint == 2 ? c.t2 : c.t3;
  };
  const Complex c00 = phi(0) * std::conj(phi(0));
  const Complex c11 = phi(1) * std::conj(phi(1));
  const Complex c01 = phi(0) * std::conj(phi(1));
  const ComplexMatrix& e01 = pick(basis_[2]);
  ComplexMatrix out = c00 * pick(basis_[0]) + c11 * pick(basis_[1]) + c01 * e01;
  out += std::conj(c01) * e01.adjoint();
  return out;
}

Trajectory OperatorBasisRun::trajectory(const InputState& phi) const {
  DensityMatrix r1 = as_state(combine(phi.vector, 1));
  DensityMatrix r2 = as_state(combine(phi.vector, 2));
  DensityMatrix r3 = as_state(combine(phi.vector, 3));
  MeasurementOutcome outcome = project(r3.matrix(), measured_);
  return Trajectory{std::move(r1), std::move(r2), std::move(r3), std::move(outcome)};
}

}  // namespace scramblesim
