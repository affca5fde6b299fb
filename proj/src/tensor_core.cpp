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

#include "scramblesim/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace scramblesim {

namespace {

// Bit mask of a 1-based site in an n-qubit index (qubit 1 is the MSB).
constexpr std::size_t site_bit(int site, int n) { return std::size_t{1} << (n - site); }

// Scatters the k bits of `sub` onto the positions of `sites` (first listed
// site receives the most significant bit of `sub`).
std::size_t scatter(std::size_t sub, std::span<const int> sites, int n) {
  std::size_t out = 0;
  const auto k = sites.size();
  for (std::size_t i = 0; i < k; ++i) {
    if ((sub >> (k - 1 - i)) & 1U) out |= site_bit(sites[i], n);
  }
  return out;
}

std::size_t mask_of(const QubitSubset& s, int n) {
  std::size_t m = 0;
  for (int site : s.sites()) m |= site_bit(site, n);
  return m;
}

}  // namespace

QubitSubset::QubitSubset(std::initializer_list<int> sites)
    : QubitSubset(std::vector<int>(sites)) {}

QubitSubset::QubitSubset(std::vector<int> sites) : sites_(std::move(sites)) {
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (sites_[i] < 1) throw std::invalid_argument("QubitSubset: site indices start at 1");
    if (i > 0 && sites_[i] <= sites_[i - 1]) {
      throw std::invalid_argument("QubitSubset: sites must be strictly increasing");
    }
  }
}

QubitSubset QubitSubset::all(int n) { return range(1, n); }

QubitSubset QubitSubset::range(int lo, int hi) {
  std::vector<int> s;
  for (int q = lo; q <= hi; ++q) s.push_back(q);
  return QubitSubset(std::move(s));
}

bool QubitSubset::contains(int site) const {
  return std::binary_search(sites_.begin(), sites_.end(), site);
}

QubitSubset QubitSubset::complement(int n) const {
  std::vector<int> s;
  for (int q = 1; q <= n; ++q) {
    if (!contains(q)) s.push_back(q);
  }
  return QubitSubset(std::move(s));
}

void QubitSubset::check_within(int n) const {
  if (!sites_.empty() && sites_.back() > n) {
    throw std::invalid_argument("QubitSubset: site " + std::to_string(sites_.back()) +
                                " out of range for " + std::to_string(n) + " qubits");
  }
}

std::string QubitSubset::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < sites_.size(); ++i) os << (i ? "," : "") << sites_[i];
  os << '}';
  return os.str();
}

int qubits_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || n == 0) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not 2^k with k >= 1");
  }
  return n;
}

DensityMatrix::DensityMatrix(int num_qubits, ComplexMatrix matrix)
    : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  if (num_qubits < 1 || matrix_.rows() != d || matrix_.cols() != d) {
    throw std::invalid_argument("DensityMatrix: matrix must be 2^n x 2^n");
  }
  if (hermiticity_error(matrix_) > kHermitianTol) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex{1.0, 0.0}) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  }
}

DensityMatrix DensityMatrix::from_state_vector(const Eigen::VectorXcd& psi) {
  const int n = qubits_for_dim(psi.size());
  return DensityMatrix(n, psi * psi.adjoint());
}

DensityMatrix DensityMatrix::normalized(int num_qubits, ComplexMatrix matrix) {
  const double tr = matrix.trace().real();
  if (!(tr > 0.0)) throw std::invalid_argument("DensityMatrix: non-positive trace");
  matrix /= tr;
  return DensityMatrix(num_qubits, std::move(matrix));
}

void DensityMatrix::validate() const {
  if (hermiticity_error(matrix_) > kHermitianTol) {
    throw std::runtime_error("DensityMatrix: Hermiticity violated");
  }
  if (std::abs(matrix_.trace() - Complex{1.0, 0.0}) > kTraceTol) {
    throw std::runtime_error("DensityMatrix: trace violated");
  }
  const auto ev = hermitian_eigenvalues(matrix_);
  if (ev.front() < -kPsdTol) throw std::runtime_error("DensityMatrix: not positive semidefinite");
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, const QubitSubset& sites, int n) {
  sites.check_within(n);
  const std::size_t k = sites.size();
  if (k == 0 || op.rows() != (Eigen::Index{1} << k) || op.cols() != op.rows()) {
    throw std::invalid_argument("embed: operator dimension " + std::to_string(op.rows()) +
                                " does not match " + std::to_string(k) + " sites");
  }
  const std::size_t d = std::size_t{1} << n;
  const std::size_t sub_dim = std::size_t{1} << k;
  const std::size_t site_mask = mask_of(sites, n);
  std::vector<std::size_t> offsets(sub_dim);
  for (std::size_t s = 0; s < sub_dim; ++s) offsets[s] = scatter(s, sites.sites(), n);

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t base = 0; base < d; ++base) {
    if (base & site_mask) continue;
    for (std::size_t r = 0; r < sub_dim; ++r) {
      for (std::size_t c = 0; c < sub_dim; ++c) {
        out(static_cast<Eigen::Index>(base | offsets[r]), static_cast<Eigen::Index>(base | offsets[c])) =
            op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return out;
}

namespace {

void check_apply_args(const ComplexMatrix& m, const ComplexMatrix& op, const QubitSubset& sites, int n) {
  sites.check_within(n);
  const Eigen::Index d = Eigen::Index{1} << n;
  if (m.rows() != d || m.cols() != d) throw std::invalid_argument("apply: matrix is not 2^n x 2^n");
  if (sites.empty() || op.rows() != (Eigen::Index{1} << sites.size()) || op.cols() != op.rows()) {
    throw std::invalid_argument("apply: operator dimension does not match sites");
  }
}

// Row (or column) index groups: bases with all site bits cleared, plus the
// offsets that select each sub-basis state.
struct IndexGroups {
  std::vector<std::size_t> bases;
  std::vector<std::size_t> offsets;
};

IndexGroups index_groups(const QubitSubset& sites, int n) {
  IndexGroups g;
  const std::size_t d = std::size_t{1} << n;
  const std::size_t sub = std::size_t{1} << sites.size();
  const std::size_t m = mask_of(sites, n);
  g.offsets.resize(sub);
  for (std::size_t s = 0; s < sub; ++s) g.offsets[s] = scatter(s, sites.sites(), n);
  g.bases.reserve(d / sub);
  for (std::size_t b = 0; b < d; ++b) {
    if (!(b & m)) g.bases.push_back(b);
  }
  return g;
}

}  // namespace

void apply_left(ComplexMatrix& m, const ComplexMatrix& op, const QubitSubset& sites, int n) {
  check_apply_args(m, op, sites, n);
  const auto g = index_groups(sites, n);
  const std::size_t sub = g.offsets.size();
  const auto d = static_cast<std::size_t>(m.rows());
  std::vector<Complex> in(sub);
  Complex* data = m.data();
  for (std::size_t c = 0; c < d; ++c) {
    Complex* col = data + c * d;
    for (std::size_t base : g.bases) {
      for (std::size_t s = 0; s < sub; ++s) in[s] = col[base | g.offsets[s]];
      for (std::size_t r = 0; r < sub; ++r) {
        Complex acc{0.0, 0.0};
        for (std::size_t s = 0; s < sub; ++s) {
          acc += op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) * in[s];
        }
        col[base | g.offsets[r]] = acc;
      }
    }
  }
}

void apply_right_adjoint(ComplexMatrix& m, const ComplexMatrix& op, const QubitSubset& sites, int n) {
  check_apply_args(m, op, sites, n);
  const auto g = index_groups(sites, n);
  const std::size_t sub = g.offsets.size();
  const auto d = static_cast<std::size_t>(m.rows());
  const ComplexMatrix op_conj = op.conjugate();
  // (m U^dagger)(:, c) = sum_c' conj(U(c, c')) m(:, c'): whole-column updates.
  std::vector<Complex> scratch(sub * d);
  Complex* data = m.data();
  for (std::size_t base : g.bases) {
    for (std::size_t s = 0; s < sub; ++s) {
      const Complex* src = data + (base | g.offsets[s]) * d;
      std::copy(src, src + d, scratch.begin() + static_cast<std::ptrdiff_t>(s * d));
    }
    for (std::size_t r = 0; r < sub; ++r) {
      Complex* dst = data + (base | g.offsets[r]) * d;
      std::fill(dst, dst + d, Complex{0.0, 0.0});
      for (std::size_t s = 0; s < sub; ++s) {
        const Complex w = op_conj(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
        if (w == Complex{0.0, 0.0}) continue;
        const Complex* src = scratch.data() + s * d;
        for (std::size_t i = 0; i < d; ++i) dst[i] += w * src[i];
      }
    }
  }
}

void conjugate_by(ComplexMatrix& m, const ComplexMatrix& op, const QubitSubset& sites, int n) {
  LocalConjugation(op, sites, n).apply(m);
}

std::vector<std::vector<Eigen::Index>> coupled_blocks(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("coupled_blocks: matrix is not square");
  const Eigen::Index d = m.rows();
  std::vector<Eigen::Index> label(static_cast<std::size_t>(d), -1);
  std::vector<std::vector<Eigen::Index>> blocks;
  for (Eigen::Index seed = 0; seed < d; ++seed) {
    if (label[seed] >= 0) continue;
    const auto id = static_cast<Eigen::Index>(blocks.size());
    std::vector<Eigen::Index> block{seed};
    label[seed] = id;
    for (std::size_t k = 0; k < block.size(); ++k) {
      const Eigen::Index i = block[k];
      for (Eigen::Index j = 0; j < d; ++j) {
        if (label[j] < 0 && (m(i, j) != Complex{} || m(j, i) != Complex{})) {
          label[j] = id;
          block.push_back(j);
        }
      }
    }
    std::sort(block.begin(), block.end());
    blocks.push_back(std::move(block));
  }
  return blocks;
}

LocalConjugation::LocalConjugation(const ComplexMatrix& op, const QubitSubset& sites, int n) : n_(n), op_(op) {
  sites.check_within(n);
  if (sites.empty() || op_.rows() != (Eigen::Index{1} << sites.size()) || op_.cols() != op_.rows()) {
    throw std::invalid_argument("LocalConjugation: operator dimension does not match sites");
  }
  const auto g = index_groups(sites, n);
  bases_.assign(g.bases.begin(), g.bases.end());
  offsets_.assign(g.offsets.begin(), g.offsets.end());
}

template <int S>
void LocalConjugation::apply_fixed(ComplexMatrix& m) const {
  using Block = Eigen::Matrix<Complex, S, S>;
  const Block u = op_;
  const Block u_adj = op_.adjoint();
  const auto sub = static_cast<Eigen::Index>(offsets_.size());
  Block x(sub, sub);
  for (Eigen::Index cb : bases_) {
    for (Eigen::Index rb : bases_) {
      for (Eigen::Index c = 0; c < sub; ++c) {
        for (Eigen::Index r = 0; r < sub; ++r) x(r, c) = m(rb | offsets_[r], cb | offsets_[c]);
      }
      const Block y = u * x * u_adj;
      for (Eigen::Index c = 0; c < sub; ++c) {
        for (Eigen::Index r = 0; r < sub; ++r) m(rb | offsets_[r], cb | offsets_[c]) = y(r, c);
      }
    }
  }
}

void LocalConjugation::apply(ComplexMatrix& m) const {
  const Eigen::Index d = Eigen::Index{1} << n_;
  if (m.rows() != d || m.cols() != d) throw std::invalid_argument("LocalConjugation: matrix is not 2^n x 2^n");
  // Fixed sizes let Eigen unroll and vectorize the small products.
  switch (op_.rows()) {
    case 2: apply_fixed<2>(m); return;
    case 4: apply_fixed<4>(m); return;
    case 8: apply_fixed<8>(m); return;
    default: apply_fixed<Eigen::Dynamic>(m); return;
  }
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, int n, const QubitSubset& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  keep.check_within(n);
  const QubitSubset traced = keep.complement(n);
  const std::size_t kd = std::size_t{1} << keep.size();
  const std::size_t td = std::size_t{1} << traced.size();
  std::vector<std::size_t> keep_off(kd), trace_off(td);
  for (std::size_t s = 0; s < kd; ++s) keep_off[s] = scatter(s, keep.sites(), n);
  for (std::size_t s = 0; s < td; ++s) trace_off[s] = scatter(s, traced.sites(), n);

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(kd), static_cast<Eigen::Index>(kd));
  for (std::size_t j = 0; j < kd; ++j) {
    for (std::size_t i = 0; i < kd; ++i) {
      Complex acc{0.0, 0.0};
      for (std::size_t t = 0; t < td; ++t) {
        acc += rho(static_cast<Eigen::Index>(keep_off[i] | trace_off[t]),
                   static_cast<Eigen::Index>(keep_off[j] | trace_off[t]));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const QubitSubset& keep) {
  return DensityMatrix(static_cast<int>(keep.size()),
                       partial_trace(rho.matrix(), rho.num_qubits(), keep));
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, int n, const QubitSubset& subsystem_b) {
  subsystem_b.check_within(n);
  if (subsystem_b.empty() || static_cast<int>(subsystem_b.size()) >= n) {
    throw std::invalid_argument("partial_transpose: subsystem must be a nonempty proper subset");
  }
  const std::size_t b_mask = mask_of(subsystem_b, n);
  const auto d = static_cast<std::size_t>(rho.rows());
  ComplexMatrix out(rho.rows(), rho.cols());
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) {
      const std::size_t src_r = (r & ~b_mask) | (c & b_mask);
      const std::size_t src_c = (c & ~b_mask) | (r & b_mask);
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rho(static_cast<Eigen::Index>(src_r), static_cast<Eigen::Index>(src_c));
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, const QubitSubset& subsystem_b) {
  return partial_transpose(rho.matrix(), rho.num_qubits(), subsystem_b);
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eigenvalues: matrix not square");
  if (hermiticity_error(m) > kHermitianTol) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigenvalues: no convergence");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace scramblesim
