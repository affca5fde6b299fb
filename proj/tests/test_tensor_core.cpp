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

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "scramblesim/gates.hpp"
#include "scramblesim/tensor_core.hpp"
#include "support/random_states.hpp"

namespace scramblesim {
namespace {

using testing_support::random_density;
using testing_support::random_unitary;

ComplexMatrix basis_ket(int n, int index) {
  ComplexMatrix v = ComplexMatrix::Zero(Eigen::Index{1} << n, 1);
  v(index, 0) = 1.0;
  return v;
}

// Bits of a 1-based qubit list read as q1 q2 ... qn.
int index_of(std::initializer_list<int> bits) {
  int v = 0;
  for (int b : bits) v = (v << 1) | b;
  return v;
}

ComplexMatrix bell_projector() {
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  return phi * phi.adjoint();
}

TEST(QubitSubset, RejectsUnsortedAndNonPositive) {
  EXPECT_THROW(QubitSubset({2, 1}), std::invalid_argument);
  EXPECT_THROW(QubitSubset({1, 1}), std::invalid_argument);
  EXPECT_THROW(QubitSubset({0}), std::invalid_argument);
  EXPECT_THROW(QubitSubset({1, 8}).check_within(7), std::invalid_argument);
  EXPECT_EQ(QubitSubset({2, 4}).complement(5), QubitSubset({1, 3, 5}));
  EXPECT_EQ(QubitSubset::range(4, 7).to_string(), "{4,5,6,7}");
}

TEST(DensityMatrix, ChecksInvariants) {
  EXPECT_THROW(DensityMatrix(1, ComplexMatrix::Identity(2, 2)), std::invalid_argument);  // trace 2
  ComplexMatrix nonherm = ComplexMatrix::Zero(2, 2);
  nonherm(0, 0) = 1.0;
  nonherm(0, 1) = 0.3;
  EXPECT_THROW(DensityMatrix(1, nonherm), std::invalid_argument);
  ComplexMatrix negative = ComplexMatrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  const DensityMatrix d(1, negative);
  EXPECT_THROW(d.validate(), std::runtime_error);
  EXPECT_THROW(DensityMatrix(2, ComplexMatrix::Identity(2, 2) / 2.0), std::invalid_argument);
}

TEST(Kron, IdentityAndDiagonal) {
  EXPECT_TRUE(kron(pauli::identity(), pauli::identity()).isApprox(ComplexMatrix::Identity(4, 4)));
  ComplexMatrix zz = ComplexMatrix::Zero(4, 4);
  zz.diagonal() << 1.0, -1.0, -1.0, 1.0;
  EXPECT_EQ(max_abs_diff(kron(pauli::z(), pauli::z()), zz), 0.0);
}

TEST(Kron, XXFlipsBothBits) {
  // X (x) X |00> = |11>, worked out as the 4x4 product by hand.
  const ComplexMatrix out = kron(pauli::x(), pauli::x()) * basis_ket(2, 0);
  EXPECT_EQ(max_abs_diff(out, basis_ket(2, 3)), 0.0);
}

TEST(Embed, SingleSiteFrontAndBack) {
  EXPECT_EQ(max_abs_diff(embed(pauli::z(), {1}, 2), kron(pauli::z(), pauli::identity())), 0.0);
  EXPECT_EQ(max_abs_diff(embed(pauli::z(), {2}, 2), kron(pauli::identity(), pauli::z())), 0.0);
}

TEST(Embed, SwapOnNonAdjacentSitesMatchesPermutationOracle) {
  const ComplexMatrix s = embed(swap_gate(), {1, 3}, 3);
  for (int b = 0; b < 8; ++b) {
    const int q1 = (b >> 2) & 1, q2 = (b >> 1) & 1, q3 = b & 1;
    const int expected = index_of({q3, q2, q1});
    EXPECT_EQ(max_abs_diff(s * basis_ket(3, b), basis_ket(3, expected)), 0.0) << "basis " << b;
  }
  EXPECT_EQ(max_abs_diff(s * basis_ket(3, index_of({1, 0, 0})), basis_ket(3, index_of({0, 0, 1}))), 0.0);
}

TEST(Embed, FullSiteListIsIdentityLift) {
  std::mt19937_64 rng(11);
  const ComplexMatrix u = random_unitary(rng, 8);
  EXPECT_EQ(max_abs_diff(embed(u, QubitSubset::all(3), 3), u), 0.0);
}

TEST(Embed, Composes) {
  std::mt19937_64 rng(12);
  const QubitSubset s{2, 5};
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix a = random_unitary(rng, 4);
    const ComplexMatrix b = random_unitary(rng, 4);
    EXPECT_LE(max_abs_diff(embed(a, s, 6) * embed(b, s, 6), embed(a * b, s, 6)), 1e-12);
  }
}

TEST(Embed, DimensionMismatchThrows) {
  EXPECT_THROW((void)embed(pauli::z(), {1, 2}, 3), std::invalid_argument);
}

TEST(Conjugation, InPlaceKernelsMatchDenseEmbedding) {
  std::mt19937_64 rng(13);
  const int n = 5;
  const ComplexMatrix rho = random_density(rng, n).matrix();
  for (const QubitSubset& s : {QubitSubset{3}, QubitSubset{1, 4}, QubitSubset{2, 3, 5}}) {
    const ComplexMatrix u = random_unitary(rng, Eigen::Index{1} << s.size());
    const ComplexMatrix full = embed(u, s, n);

    ComplexMatrix left = rho;
    apply_left(left, u, s, n);
    EXPECT_LE(max_abs_diff(left, full * rho), 1e-12);

    ComplexMatrix right = rho;
    apply_right_adjoint(right, u, s, n);
    EXPECT_LE(max_abs_diff(right, rho * full.adjoint()), 1e-12);

    ComplexMatrix both = rho;
    conjugate_by(both, u, s, n);
    EXPECT_LE(max_abs_diff(both, full * rho * full.adjoint()), 1e-12);

    ComplexMatrix cached = rho;
    LocalConjugation(u, s, n).apply(cached);
    EXPECT_LE(max_abs_diff(cached, both), 1e-12);
  }
}

TEST(PartialTrace, ProductAndBellStates) {
  const DensityMatrix zero2 = DensityMatrix::from_state_vector(basis_ket(2, 0).col(0));
  const DensityMatrix reduced = partial_trace(zero2, {1});
  EXPECT_EQ(max_abs_diff(reduced.matrix(), basis_ket(1, 0) * basis_ket(1, 0).adjoint()), 0.0);

  // Sum of the two diagonal 2x2 blocks of the Bell projector, i.e. 1/2.
  const DensityMatrix bell(2, bell_projector());
  EXPECT_LE(max_abs_diff(partial_trace(bell, {2}).matrix(), ComplexMatrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(PartialTrace, KeepEverythingIsIdentity) {
  std::mt19937_64 rng(14);
  const DensityMatrix rho = random_density(rng, 3);
  EXPECT_EQ(max_abs_diff(partial_trace(rho, QubitSubset::all(3)).matrix(), rho.matrix()), 0.0);
  EXPECT_THROW((void)partial_trace(rho, QubitSubset{}), std::invalid_argument);
}

TEST(PartialTrace, PreservesTraceAndPositivity) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = random_density(rng, 4);
    const DensityMatrix r = partial_trace(rho, {1, 3});
    EXPECT_NEAR(r.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_NO_THROW(r.validate());
  }
}

TEST(PartialTranspose, ProductStateTransposesFactor) {
  std::mt19937_64 rng(16);
  const DensityMatrix a = random_density(rng, 1);
  const DensityMatrix b = random_density(rng, 2);
  const DensityMatrix ab(3, kron(a.matrix(), b.matrix()));
  const ComplexMatrix pt = partial_transpose(ab, {2, 3});
  EXPECT_LE(max_abs_diff(pt, kron(a.matrix(), b.matrix().transpose())), 1e-15);
  EXPECT_GE(hermitian_eigenvalues(pt).front(), -1e-12);
}

TEST(PartialTranspose, BellPairSpectrum) {
  // Characteristic polynomial of the explicit 4x4 transpose: roots 1/2 (x3), -1/2.
  const DensityMatrix bell(2, bell_projector());
  const auto ev = hermitian_eigenvalues(partial_transpose(bell, {2}));
  ASSERT_EQ(ev.size(), 4u);
  EXPECT_NEAR(ev[0], -0.5, 1e-14);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(ev[i], 0.5, 1e-14);
}

TEST(PartialTranspose, InvolutionIsBitExact) {
  std::mt19937_64 rng(17);
  const DensityMatrix rho = random_density(rng, 4);
  for (const QubitSubset& b : {QubitSubset{1}, QubitSubset{2, 4}, QubitSubset{2, 3, 4}}) {
    const ComplexMatrix once = partial_transpose(rho, b);
    EXPECT_LE(hermiticity_error(once), 1e-15);
    EXPECT_NEAR(once.trace().real(), 1.0, 1e-12);
    EXPECT_EQ(max_abs_diff(partial_transpose(once, 4, b), rho.matrix()), 0.0);
  }
}

TEST(PartialTranspose, RejectsEmptyOrFullSubsystem) {
  std::mt19937_64 rng(18);
  const DensityMatrix rho = random_density(rng, 2);
  EXPECT_THROW((void)partial_transpose(rho, QubitSubset{}), std::invalid_argument);
  EXPECT_THROW((void)partial_transpose(rho, QubitSubset{1, 2}), std::invalid_argument);
}

TEST(HermitianEigenvalues, KnownSpectra) {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 2.0;
  const auto ev = hermitian_eigenvalues(d);
  EXPECT_NEAR(ev[0], 1.0, 1e-15);
  EXPECT_NEAR(ev[1], 2.0, 1e-15);
  EXPECT_NEAR(ev[2], 3.0, 1e-15);
  const auto x = hermitian_eigenvalues(pauli::x());
  EXPECT_NEAR(x[0], -1.0, 1e-15);
  EXPECT_NEAR(x[1], 1.0, 1e-15);
}

TEST(HermitianEigenvalues, SumEqualsTrace) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix g = testing_support::ginibre(rng, 8, 8);
    const ComplexMatrix h = g + g.adjoint();
    const auto ev = hermitian_eigenvalues(h);
    double trace = 0.0;
    for (int i = 0; i < 8; ++i) trace += h(i, i).real();
    EXPECT_NEAR(std::accumulate(ev.begin(), ev.end(), 0.0), trace, 1e-8);
  }
}

TEST(HermitianEigenvalues, RejectsNonHermitian) {
  ComplexMatrix m = pauli::x();
  m(0, 1) = 2.0;
  EXPECT_THROW((void)hermitian_eigenvalues(m), std::invalid_argument);
}

TEST(CoupledBlocks, FindsInvariantSubspaces) {
  const auto xx = coupled_blocks(kron(pauli::x(), pauli::x()));
  ASSERT_EQ(xx.size(), 2u);
  EXPECT_EQ(xx[0], (std::vector<Eigen::Index>{0, 3}));
  EXPECT_EQ(xx[1], (std::vector<Eigen::Index>{1, 2}));
  EXPECT_EQ(coupled_blocks(pauli::z()).size(), 2u);
}

}  // namespace
}  // namespace scramblesim
