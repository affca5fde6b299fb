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

#include "scramblesim/gates.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "scramblesim/schedule_file.hpp"

namespace scramblesim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

ComplexMatrix swap_pattern() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(1, 1) = 1.0;
  m(1, 2) = -1.0;
  m(2, 1) = -1.0;
  m(2, 2) = 1.0;
  return m;
}

void check_tau(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("gate duration must be positive");
}

bool in_window(const GateLine& g, double lo, double hi, int first_site) {
  if (g.start < lo - 1e-9 || g.start + g.duration > hi + 1e-9) return false;
  return std::all_of(g.sites.begin(), g.sites.end(),
                     [&](int s) { return s >= first_site && s < first_site + 3; });
}

std::vector<GateSegment> encoder_segments(EncodingKind kind, double alpha, int first_site,
                                          bool conjugate) {
  const auto& sched = builtin_schedule(kind);
  const double t1 = sched.mark("t1");
  const double t2 = sched.mark("t2");
  std::vector<GateSegment> out;
  for (const auto& g : sched.gates) {
    if (!in_window(g, t1, t2, first_site)) continue;
    out.push_back(conjugate ? g.instantiate_conjugate(alpha) : g.instantiate(alpha));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const GateSegment& a, const GateSegment& b) { return a.start < b.start; });
  return out;
}

}  // namespace

std::string_view to_string(EncodingKind kind) {
  return kind == EncodingKind::Scrambling ? "scrambling" : "swap";
}

EncodingKind parse_encoding_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "scrambling" || lower == "scr") return EncodingKind::Scrambling;
  if (lower == "swap") return EncodingKind::Swap;
  throw std::invalid_argument("unknown protocol '" + std::string(text) + "'");
}

namespace pauli {
ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
  // Exponentiate each decoupled block on its own so entries that are zero in
  // every power of h stay exactly zero.
  ComplexMatrix out = ComplexMatrix::Zero(h.rows(), h.cols());
  for (const auto& idx : coupled_blocks(h)) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    ComplexMatrix sub(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) sub(r, c) = h(idx[r], idx[c]);
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sub);
    if (solver.info() != Eigen::Success) throw std::runtime_error("expm_hermitian: no convergence");
    const Eigen::VectorXcd phases =
        (solver.eigenvalues().cast<Complex>() * Complex{0.0, -t}).array().exp().matrix();
    const ComplexMatrix& v = solver.eigenvectors();
    const ComplexMatrix block = v * phases.asDiagonal() * v.adjoint();
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) out(idx[r], idx[c]) = block(r, c);
    }
  }
  return out;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(u.rows(), u.cols())) <= tol;
}

ComplexMatrix xx_generator(double phi, double tau) {
  check_tau(tau);
  return (-phi / (2.0 * tau)) * kron(pauli::x(), pauli::x());
}

ComplexMatrix rz_generator(double phi, double tau) {
  check_tau(tau);
  return (-phi / (2.0 * tau)) * pauli::z();
}

ComplexMatrix cnot_generator(double tau) {
  check_tau(tau);
  const ComplexMatrix one = pauli::identity();
  return (-kPi / (4.0 * tau)) * kron(one - pauli::z(), one - pauli::x());
}

ComplexMatrix hadamard_generator(double tau) {
  check_tau(tau);
  return (-kPi / (2.0 * std::numbers::sqrt2 * tau)) * (pauli::x() + pauli::z());
}

ComplexMatrix param_swap_generator(double exponent, double tau) {
  check_tau(tau);
  return (-kPi * exponent / (2.0 * tau)) * swap_pattern();
}

ComplexMatrix xx_gate(double phi) { return expm_hermitian(xx_generator(phi, 1.0), 1.0); }

ComplexMatrix rz_gate(double phi) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::exp(kI * (phi / 2.0));
  m(1, 1) = std::exp(-kI * (phi / 2.0));
  return m;
}

ComplexMatrix cnot_gate() { return expm_hermitian(cnot_generator(1.0), 1.0); }

ComplexMatrix hadamard_gate() { return expm_hermitian(hadamard_generator(1.0), 1.0); }

ComplexMatrix swap_gate() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
  return m;
}

ComplexMatrix ln_swap() { return (kI * kPi / 2.0) * swap_pattern(); }

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}

ComplexMatrix param_swap(double alpha, int sign) {
  check_alpha(alpha);
  if (sign != 1 && sign != -1) throw std::invalid_argument("param_swap: sign must be +1 or -1");
  return expm_hermitian(param_swap_generator(sign * alpha, 1.0), 1.0);
}

ComplexMatrix GateSegment::unitary() const { return expm_hermitian(generator, duration); }

ComplexMatrix GateSegment::step_unitary(double dt) const { return expm_hermitian(generator, dt); }

GateSegment segmentize(const ComplexMatrix& gate, QubitSubset sites, double start, double tau,
                       std::string label) {
  check_tau(tau);
  if (!is_unitary(gate)) throw std::invalid_argument("segmentize: gate is not unitary");
  if (gate.rows() != (Eigen::Index{1} << sites.size())) {
    throw std::invalid_argument("segmentize: gate dimension does not match sites");
  }
  // A unitary is normal, so its complex Schur form is diagonal up to rounding.
  Eigen::ComplexSchur<ComplexMatrix> schur(gate);
  const ComplexMatrix& q = schur.matrixU();
  const auto& t = schur.matrixT();
  Eigen::VectorXd energies(gate.rows());
  for (Eigen::Index i = 0; i < gate.rows(); ++i) energies(i) = -std::arg(t(i, i)) / tau;
  ComplexMatrix h = q * energies.cast<Complex>().asDiagonal() * q.adjoint();
  h = 0.5 * (h + h.adjoint()).eval();
  return GateSegment{std::move(label), std::move(h), std::move(sites), start, tau};
}

ComplexMatrix compose_segments(const std::vector<GateSegment>& segments, int first_site) {
  ComplexMatrix u = ComplexMatrix::Identity(8, 8);
  for (const auto& seg : segments) {
    std::vector<int> local;
    for (int s : seg.sites.sites()) {
      if (s < first_site || s > first_site + 2) {
        throw std::invalid_argument("compose_segments: segment outside the 3-qubit block");
      }
      local.push_back(s - first_site + 1);
    }
    u = embed(seg.unitary(), QubitSubset(std::move(local)), 3) * u;
  }
  return u;
}

ComplexMatrix scrambling_unitary(double alpha) {
  check_alpha(alpha);
  return compose_segments(encoder_segments(EncodingKind::Scrambling, alpha, 1, false), 1);
}

ComplexMatrix scrambling_unitary_conjugate(double alpha) {
  check_alpha(alpha);
  return compose_segments(encoder_segments(EncodingKind::Scrambling, alpha, 1, true), 1);
}

SwapSequences swap_unitary(double alpha) {
  check_alpha(alpha);
  return {encoder_segments(EncodingKind::Swap, alpha, 1, false),
          encoder_segments(EncodingKind::Swap, alpha, 4, false)};
}

}  // namespace scramblesim
