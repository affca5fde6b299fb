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

#include "scramblesim/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scramblesim {

namespace {

constexpr double kGridTol = 1e-9;

bool is_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r != c && m(r, c) != Complex{0.0, 0.0}) return false;
    }
  }
  return true;
}

void check_disjoint(std::span<const GateSegment> active) {
  for (std::size_t i = 0; i < active.size(); ++i) {
    for (std::size_t j = i + 1; j < active.size(); ++j) {
      for (int s : active[i].sites.sites()) {
        if (active[j].sites.contains(s)) {
          throw std::invalid_argument("segments '" + active[i].label + "' and '" + active[j].label +
                                      "' overlap on qubit " + std::to_string(s));
        }
      }
    }
  }
}

}  // namespace

std::string_view to_string(RateConvention c) { return c == RateConvention::Kraus ? "kraus" : "lindblad"; }

RateConvention parse_rate_convention(std::string_view text) {
  if (text == "kraus") return RateConvention::Kraus;
  if (text == "lindblad") return RateConvention::Lindblad;
  throw std::invalid_argument("unknown rate convention '" + std::string(text) + "'");
}

double NoiseModel::kraus_rate() const {
  return convention == RateConvention::Kraus ? gamma : 0.5 * gamma;
}

ComplexMatrix NoiseModel::jump_operator() {
  return 0.5 * (pauli::identity() + pauli::z());
}

void NoiseModel::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be >= 0");
}

double KrausPair::completeness_error() const {
  const ComplexMatrix sum = k1.adjoint() * k1 + k2.adjoint() * k2;
  return max_abs_diff(sum, ComplexMatrix::Identity(sum.rows(), sum.cols()));
}

KrausPair dephasing_kraus(double gamma, double dt) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("dephasing_kraus: gamma must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dephasing_kraus: dt must be > 0");
  const ComplexMatrix n = NoiseModel::jump_operator();
  const double decay = std::exp(-gamma * dt);
  // 1 - e^{-2 gamma dt} without cancellation for small gamma dt.
  const double k2_weight = std::sqrt(-std::expm1(-2.0 * gamma * dt));
  return KrausPair{pauli::identity() + n * (decay - 1.0), k2_weight * n};
}

void apply_single_qubit_kraus(ComplexMatrix& rho, int n, const KrausPair& kraus, int site) {
  const QubitSubset s{site};
  ComplexMatrix second = rho;
  conjugate_by(rho, kraus.k1, s, n);
  conjugate_by(second, kraus.k2, s, n);
  rho += second;
}

DephasingChannel::DephasingChannel(int n, const NoiseModel& noise, double dt)
    : n_(n), kraus_(dephasing_kraus(noise.kraus_rate(), dt)), identity_(noise.gamma == 0.0) {
  noise.validate();
  if (!is_diagonal(kraus_.k1) || !is_diagonal(kraus_.k2)) {
    throw std::logic_error("DephasingChannel: Kraus operators must be diagonal");
  }
  // Single-site multiplier: sum_j K_j(a, a) conj(K_j(b, b)).
  Complex site[2][2];
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      site[a][b] = kraus_.k1(a, a) * std::conj(kraus_.k1(b, b)) + kraus_.k2(a, a) * std::conj(kraus_.k2(b, b));
    }
  }
  const Eigen::Index d = Eigen::Index{1} << n;
  factors_.resize(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      double f = 1.0;
      for (int q = 0; q < n; ++q) f *= site[(r >> q) & 1][(c >> q) & 1].real();
      factors_(r, c) = f;
    }
  }
}

void DephasingChannel::apply(ComplexMatrix& rho) const {
  if (identity_) return;
  if (rho.rows() != factors_.rows() || rho.cols() != factors_.cols()) {
    throw std::invalid_argument("DephasingChannel: dimension mismatch");
  }
  rho.array() *= factors_.array().cast<Complex>();
}

ComplexMatrix dissipative_step(const ComplexMatrix& rho, int n, const NoiseModel& noise, double dt) {
  noise.validate();
  const KrausPair kraus = dephasing_kraus(noise.kraus_rate(), dt);
  ComplexMatrix out = rho;
  for (int q = 1; q <= n; ++q) apply_single_qubit_kraus(out, n, kraus, q);
  return out;
}

DensityMatrix dissipative_step(const DensityMatrix& rho, const NoiseModel& noise, double dt) {
  return DensityMatrix(rho.num_qubits(), dissipative_step(rho.matrix(), rho.num_qubits(), noise, dt));
}

ComplexMatrix unitary_step(const ComplexMatrix& rho, int n, std::span<const GateSegment> active, double dt) {
  check_disjoint(active);
  ComplexMatrix out = rho;
  for (const auto& seg : active) conjugate_by(out, seg.step_unitary(dt), seg.sites, n);
  return out;
}

DensityMatrix unitary_step(const DensityMatrix& rho, std::span<const GateSegment> active, double dt) {
  return DensityMatrix(rho.num_qubits(), unitary_step(rho.matrix(), rho.num_qubits(), active, dt));
}

Evolver::Evolver(int n, std::vector<GateSegment> segments, const NoiseModel& noise,
                 const EvolutionConfig& cfg)
    : n_(n), dt_(cfg.dt), segments_(std::move(segments)), dephasing_(n, noise, cfg.dt) {
  if (!(dt_ > 0.0)) throw std::invalid_argument("dt must be > 0");
  for (const auto& seg : segments_) {
    seg.sites.check_within(n_);
    first_bin_.push_back(to_bin(seg.start, "segment start"));
    end_bin_.push_back(to_bin(seg.end(), "segment end"));
    if (end_bin_.back() <= first_bin_.back()) throw std::invalid_argument("segment shorter than dt");

    StepOp op;
    const ComplexMatrix u = seg.step_unitary(dt_);
    op.diagonal = is_diagonal(u);
    if (op.diagonal) {
      op.full_phases = embed(u, seg.sites, n_).diagonal();
    } else {
      op.conjugation.emplace(u, seg.sites, n_);
    }
    ops_.push_back(std::move(op));
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    for (std::size_t j = i + 1; j < segments_.size(); ++j) {
      const bool overlap_in_time = first_bin_[i] < end_bin_[j] && first_bin_[j] < end_bin_[i];
      if (!overlap_in_time) continue;
      for (int s : segments_[i].sites.sites()) {
        if (segments_[j].sites.contains(s)) {
          throw std::invalid_argument("segments '" + segments_[i].label + "' and '" + segments_[j].label +
                                      "' overlap on qubit " + std::to_string(s));
        }
      }
    }
  }
}

long long Evolver::to_bin(double t, const char* what) const {
  const double steps = t / dt_;
  const double rounded = std::round(steps);
  if (std::abs(rounded * dt_ - t) > kGridTol) {
    throw std::invalid_argument(std::string(what) + " " + std::to_string(t) +
                                " is not on the step grid of dt = " + std::to_string(dt_));
  }
  return static_cast<long long>(rounded);
}

std::vector<std::size_t> Evolver::active_in_bin(long long bin) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (first_bin_[i] <= bin && bin < end_bin_[i]) out.push_back(i);
  }
  return out;
}

void Evolver::apply_step_ops(ComplexMatrix& rho, long long bin) const {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (first_bin_[i] > bin || bin >= end_bin_[i]) continue;
    const StepOp& op = ops_[i];
    if (op.diagonal) {
      const Eigen::VectorXcd& ph = op.full_phases;
      for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        const Complex pc = std::conj(ph(c));
        rho.col(c).array() *= ph.array() * pc;
      }
    } else {
      op.conjugation->apply(rho);
    }
  }
}

void Evolver::evolve(ComplexMatrix& rho, double t_from, double t_to) const {
  const long long from = to_bin(t_from, "t_from");
  const long long to = to_bin(t_to, "t_to");
  if (from > to) throw std::invalid_argument("evolve: t_from must not exceed t_to");
  const Eigen::Index d = Eigen::Index{1} << n_;
  if (rho.rows() != d || rho.cols() != d) throw std::invalid_argument("evolve: dimension mismatch");
  for (long long bin = from; bin < to; ++bin) {
    apply_step_ops(rho, bin);
    dephasing_.apply(rho);
  }
}

DensityMatrix Evolver::evolve(const DensityMatrix& rho, double t_from, double t_to) const {
  ComplexMatrix m = rho.matrix();
  evolve(m, t_from, t_to);
  return DensityMatrix(rho.num_qubits(), std::move(m));
}

DensityMatrix evolve(const DensityMatrix& rho, std::span<const GateSegment> segments, const NoiseModel& noise,
                     const EvolutionConfig& cfg, double t_from, double t_to) {
  if (!(t_from < t_to)) throw std::invalid_argument("evolve: t_from must be < t_to");
  const Evolver evolver(rho.num_qubits(), {segments.begin(), segments.end()}, noise, cfg);
  return evolver.evolve(rho, t_from, t_to);
}

}  // namespace scramblesim
