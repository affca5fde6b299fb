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

#include "scramblesim/metrics.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace scramblesim {

namespace {

double log_in_base(double x, LogBase base) { return base == LogBase::Two ? std::log2(x) : std::log(x); }

double negativity_of(const ComplexMatrix& rho, int n, const QubitSubset& b) {
  const ComplexMatrix pt = partial_transpose(rho, n, b);
  double sum = 0.0;
  for (double lambda : hermitian_eigenvalues(pt)) {
    if (lambda < -kNegativityCutoff) sum += -lambda;
  }
  return sum;
}

double log_negativity_of(const ComplexMatrix& rho, int n, const QubitSubset& b, LogBase base) {
  return log_in_base(1.0 + 2.0 * negativity_of(rho, n, b), base);
}

}  // namespace

std::string_view to_string(LogBase b) { return b == LogBase::Two ? "2" : "e"; }

LogBase parse_log_base(std::string_view text) {
  if (text == "2") return LogBase::Two;
  if (text == "e") return LogBase::E;
  throw std::invalid_argument("log_base must be 2 or e, got '" + std::string(text) + "'");
}

std::string_view to_string(TotalNegativityMode m) {
  return m == TotalNegativityMode::ContiguousCuts ? "cuts" : "pairs";
}

TotalNegativityMode parse_total_negativity_mode(std::string_view text) {
  if (text == "cuts") return TotalNegativityMode::ContiguousCuts;
  if (text == "pairs") return TotalNegativityMode::NeighborPairs;
  throw std::invalid_argument("total_negativity must be cuts or pairs, got '" + std::string(text) + "'");
}

double fidelity(const DensityMatrix& rho1, const InputState& phi) {
  if (rho1.num_qubits() != 1) throw std::invalid_argument("fidelity expects a single-qubit state");
  return (phi.vector.adjoint() * rho1.matrix() * phi.vector)(0, 0).real();
}

double purity(const ComplexMatrix& rho) {
  // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
  return rho.cwiseAbs2().sum();
}

double purity(const DensityMatrix& rho) { return purity(rho.matrix()); }

double negativity(const DensityMatrix& rho, const QubitSubset& subsystem_b) {
  return negativity_of(rho.matrix(), rho.num_qubits(), subsystem_b);
}

double log_negativity(const DensityMatrix& rho, const QubitSubset& subsystem_b, LogBase base) {
  return log_negativity_of(rho.matrix(), rho.num_qubits(), subsystem_b, base);
}

double total_negativity(const DensityMatrix& rho, LogBase base, TotalNegativityMode mode) {
  const int n = rho.num_qubits();
  double total = 0.0;
  for (int k = 1; k < n; ++k) {
    if (mode == TotalNegativityMode::ContiguousCuts) {
      total += log_negativity_of(rho.matrix(), n, QubitSubset::range(k + 1, n), base);
    } else {
      const ComplexMatrix pair = partial_trace(rho.matrix(), n, QubitSubset{k, k + 1});
      total += log_negativity_of(pair, 2, QubitSubset{2}, base);
    }
  }
  return total;
}

double delta_E(const Trajectory& traj, DeltaKind which, const MetricsOptions& opts) {
  const double e2 = total_negativity(traj.rho_t2, opts.log_base, opts.total_mode);
  if (which == DeltaKind::Unitary) return e2 - total_negativity(traj.rho_t1, opts.log_base, opts.total_mode);
  return total_negativity(traj.outcome.post_state, opts.log_base, opts.total_mode) - e2;
}

RunMetrics evaluate_run(const Trajectory& traj, const InputState& phi, const MetricsOptions& opts) {
  const DensityMatrix& post = traj.outcome.post_state;
  RunMetrics m;
  m.fidelity = fidelity(partial_trace(post, QubitSubset{kTargetQubit}), phi);
  m.purity = purity(post);
  m.neg_cut34 = log_negativity(post, QubitSubset::range(4, kProtocolQubits), opts.log_base);
  m.neg_total_t1 = total_negativity(traj.rho_t1, opts.log_base, opts.total_mode);
  m.neg_total_t2 = total_negativity(traj.rho_t2, opts.log_base, opts.total_mode);
  m.neg_total_t3 = total_negativity(post, opts.log_base, opts.total_mode);
  m.success_probability = traj.outcome.success_probability;
  return m;
}

void MetricsRecord::validate() const {
  const double values[] = {fidelity_avg, purity_avg,   purity_of_mean, neg_cut34, neg_total_t1,
                           neg_total_t2, neg_total_t3, delta_E_U,      delta_E_M, success_prob_avg};
  for (double v : values) {
    if (!std::isfinite(v)) throw std::logic_error("MetricsRecord: non-finite value");
  }
  if (purity_avg < 1.0 / 128.0 - 1e-9 || purity_avg > 1.0 + 1e-9) {
    throw std::logic_error("MetricsRecord: purity outside [1/128, 1]");
  }
  if (neg_cut34 < 0.0 || neg_total_t1 < 0.0 || neg_total_t2 < 0.0 || neg_total_t3 < 0.0) {
    throw std::logic_error("MetricsRecord: negative log negativity");
  }
}

MetricsRecord average_over_inputs(EncodingKind kind, double alpha, double gamma, const AverageConfig& cfg) {
  const ProtocolSchedule schedule =
      build_schedule(kind, alpha, cfg.run.measured, cfg.run.transcription(kind));
  const NoiseModel noise{gamma, cfg.run.rate_convention};
  std::optional<OperatorBasisRun> basis;
  if (cfg.operator_basis) basis.emplace(schedule, noise, cfg.run.evolution);

  MetricsRecord rec;
  ComplexMatrix mean_post = ComplexMatrix::Zero(Eigen::Index{1} << kProtocolQubits,
                                                Eigen::Index{1} << kProtocolQubits);
  int used = 0;
  std::optional<PostselectionError> last_error;
  // Fixed input order keeps the sums bit-reproducible.
  for (const InputState& phi : InputState::pauli_eigenstates()) {
    std::optional<Trajectory> traj;
    try {
      traj.emplace(basis ? basis->trajectory(phi) : run_protocol(schedule, noise, phi, cfg.run.evolution));
    } catch (const PostselectionError& e) {
      rec.excluded_inputs.push_back(phi.label);
      last_error.emplace(e);
      continue;
    }
    const RunMetrics m = evaluate_run(*traj, phi, cfg.metrics);
    rec.fidelity_avg += m.fidelity;
    rec.purity_avg += m.purity;
    rec.neg_cut34 += m.neg_cut34;
    rec.neg_total_t1 += m.neg_total_t1;
    rec.neg_total_t2 += m.neg_total_t2;
    rec.neg_total_t3 += m.neg_total_t3;
    rec.success_prob_avg += m.success_probability;
    mean_post += traj->outcome.post_state.matrix();
    ++used;
  }
  if (used == 0) throw *last_error;

  const double inv = 1.0 / used;
  rec.fidelity_avg *= inv;
  rec.purity_avg *= inv;
  rec.neg_cut34 *= inv;
  rec.neg_total_t1 *= inv;
  rec.neg_total_t2 *= inv;
  rec.neg_total_t3 *= inv;
  rec.success_prob_avg *= inv;
  rec.delta_E_U = rec.neg_total_t2 - rec.neg_total_t1;
  rec.delta_E_M = rec.neg_total_t3 - rec.neg_total_t2;
  rec.purity_of_mean = purity(ComplexMatrix(mean_post * inv));
  return rec;
}

}  // namespace scramblesim
