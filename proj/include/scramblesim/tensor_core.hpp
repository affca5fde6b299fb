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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace scramblesim {

using Complex = std::complex<double>;

/// Dense complex matrix. Entries are addressed as (row, col); the storage
/// order is Eigen's default column-major layout.
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-8;
inline constexpr double kPsdTol = 1e-8;

/// Qubits are numbered 1..n. Qubit 1 is the most significant factor of the
/// Kronecker chain: basis index b decodes to bits (q1 q2 ... qn).
class QubitSubset {
 public:
  QubitSubset() = default;
  QubitSubset(std::initializer_list<int> sites);
  explicit QubitSubset(std::vector<int> sites);

  /// Every site 1..n.
  static QubitSubset all(int n);
  /// Sites lo..hi inclusive.
  static QubitSubset range(int lo, int hi);

  [[nodiscard]] std::span<const int> sites() const { return sites_; }
  [[nodiscard]] std::size_t size() const { return sites_.size(); }
  [[nodiscard]] bool empty() const { return sites_.empty(); }
  [[nodiscard]] bool contains(int site) const;
  [[nodiscard]] int max_site() const { return sites_.empty() ? 0 : sites_.back(); }
  /// Sites of 1..n not in this subset.
  [[nodiscard]] QubitSubset complement(int n) const;
  /// Throws std::invalid_argument if any site exceeds n.
  void check_within(int n) const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const QubitSubset&, const QubitSubset&) = default;

 private:
  std::vector<int> sites_;
};

/// A 2^n x 2^n state matrix with the density-matrix invariants checked on
/// construction (Hermiticity and unit trace; positivity is checked by
/// validate() because it needs an eigensolve).
class DensityMatrix {
 public:
  DensityMatrix(int num_qubits, ComplexMatrix matrix);

  /// |psi><psi| for a normalized state vector of length 2^n.
  static DensityMatrix from_state_vector(const Eigen::VectorXcd& psi);
  /// Builds from an arbitrary Hermitian PSD operator, dividing by its trace.
  static DensityMatrix normalized(int num_qubits, ComplexMatrix matrix);

  [[nodiscard]] int num_qubits() const { return num_qubits_; }
  [[nodiscard]] Eigen::Index dim() const { return matrix_.rows(); }
  [[nodiscard]] const ComplexMatrix& matrix() const { return matrix_; }

  /// Full invariant check including min eigenvalue >= -kPsdTol.
  void validate() const;

 private:
  int num_qubits_;
  ComplexMatrix matrix_;
};

[[nodiscard]] int qubits_for_dim(Eigen::Index dim);

[[nodiscard]] ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Lifts a 2^k operator on `sites` (in increasing order) to the 2^n space,
/// identity elsewhere.
[[nodiscard]] ComplexMatrix embed(const ComplexMatrix& op, const QubitSubset& sites, int n);

/// In place m <- embed(op, sites, n) * m, without materializing the 2^n operator.
void apply_left(ComplexMatrix& m, const ComplexMatrix& op, const QubitSubset& sites, int n);
/// In place m <- m * embed(op, sites, n)^dagger.
void apply_right_adjoint(ComplexMatrix& m, const ComplexMatrix& op, const QubitSubset& sites, int n);
/// In place m <- U m U^dagger with U = embed(op, sites, n).
void conjugate_by(ComplexMatrix& m, const ComplexMatrix& op, const QubitSubset& sites, int n);

/// Index sets of the connected components of the exact nonzero pattern of a
/// square matrix, i.e. the finest simultaneous block-diagonal split.
[[nodiscard]] std::vector<std::vector<Eigen::Index>> coupled_blocks(const ComplexMatrix& m);

/// conjugate_by with the index bookkeeping done once. Each application walks
/// the 2^k x 2^k blocks of m that U mixes and replaces X by op X op^dagger.
class LocalConjugation {
 public:
  LocalConjugation(const ComplexMatrix& op, const QubitSubset& sites, int n);

  void apply(ComplexMatrix& m) const;

 private:
  template <int S>
  void apply_fixed(ComplexMatrix& m) const;

  int n_;
  ComplexMatrix op_;
  std::vector<Eigen::Index> bases_;
  std::vector<Eigen::Index> offsets_;
};

[[nodiscard]] DensityMatrix partial_trace(const DensityMatrix& rho, const QubitSubset& keep);
[[nodiscard]] ComplexMatrix partial_trace(const ComplexMatrix& rho, int n, const QubitSubset& keep);

/// Transpose over subsystem B:
/// <i_A, j_B| rho^{T_B} |k_A, l_B> = <i_A, l_B| rho |k_A, j_B>.
[[nodiscard]] ComplexMatrix partial_transpose(const DensityMatrix& rho,
                                              const QubitSubset& subsystem_b);
[[nodiscard]] ComplexMatrix partial_transpose(const ComplexMatrix& rho, int n,
                                              const QubitSubset& subsystem_b);

/// Eigenvalues of a Hermitian matrix in ascending order.
[[nodiscard]] std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

[[nodiscard]] double hermiticity_error(const ComplexMatrix& m);
[[nodiscard]] double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace scramblesim
