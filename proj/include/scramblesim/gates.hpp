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

// Gate matrices in exponential form, their Hermitian generators for
// continuous-in-time application, and the 3-qubit encoders of the two
// teleportation circuits. Units: hbar = 1, gate time tau = 1.

#include <string>
#include <string_view>
#include <vector>

#include "scramblesim/tensor_core.hpp"

namespace scramblesim {

enum class EncodingKind { Scrambling, Swap };

[[nodiscard]] std::string_view to_string(EncodingKind kind);
/// Accepts "scrambling" / "scr" and "swap" (case-insensitive).
[[nodiscard]] EncodingKind parse_encoding_kind(std::string_view text);

namespace pauli {
[[nodiscard]] ComplexMatrix identity(Eigen::Index dim = 2);
[[nodiscard]] ComplexMatrix x();
[[nodiscard]] ComplexMatrix y();
[[nodiscard]] ComplexMatrix z();
}  // namespace pauli

/// exp(-i h t) for Hermitian h, by exact diagonalization.
[[nodiscard]] ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t);

[[nodiscard]] bool is_unitary(const ComplexMatrix& u, double tol = 1e-10);

/// XX(phi) = exp[(i phi / 2) X (x) X].
[[nodiscard]] ComplexMatrix xx_gate(double phi);
/// R_Z(phi) = exp[(i phi / 2) Z] = diag(e^{i phi/2}, e^{-i phi/2}).
[[nodiscard]] ComplexMatrix rz_gate(double phi);
/// exp[(i pi / 4)(1 - Z) (x) (1 - X)], control on the first site.
[[nodiscard]] ComplexMatrix cnot_gate();
/// exp[(i pi / (2 sqrt 2))(X + Z)] = i * H_textbook.
[[nodiscard]] ComplexMatrix hadamard_gate();
[[nodiscard]] ComplexMatrix swap_gate();
/// (i pi / 2) [[0,0,0,0],[0,1,-1,0],[0,-1,1,0],[0,0,0,0]].
[[nodiscard]] ComplexMatrix ln_swap();
/// exp[sign * alpha * ln SWAP]; alpha in [0, 1], sign = +1 or -1.
[[nodiscard]] ComplexMatrix param_swap(double alpha, int sign);

// Hermitian generators H with exp(-i H tau) equal to the gate above.
[[nodiscard]] ComplexMatrix xx_generator(double phi, double tau);
[[nodiscard]] ComplexMatrix rz_generator(double phi, double tau);
[[nodiscard]] ComplexMatrix cnot_generator(double tau);
[[nodiscard]] ComplexMatrix hadamard_generator(double tau);
/// Generator of exp[exponent * ln SWAP] over tau; exponent = sign * alpha.
[[nodiscard]] ComplexMatrix param_swap_generator(double exponent, double tau);

/// A gate applied continuously: generator H acts on `sites` during
/// [start, start + duration).
struct GateSegment {
  std::string label;
  ComplexMatrix generator;
  QubitSubset sites;
  double start = 0.0;
  double duration = 1.0;

  [[nodiscard]] double end() const { return start + duration; }
  /// exp(-i H duration).
  [[nodiscard]] ComplexMatrix unitary() const;
  /// exp(-i H dt).
  [[nodiscard]] ComplexMatrix step_unitary(double dt) const;
};

/// Segment whose generator is recovered numerically from the principal
/// matrix logarithm: H = (i / tau) log(gate). Throws for non-unitary gates.
[[nodiscard]] GateSegment segmentize(const ComplexMatrix& gate, QubitSubset sites, double start,
                                     double tau, std::string label = "custom");

/// 3-qubit encoder of the scrambling circuit (qubits 1..3), composed from
/// the checked-in schedule transcription.
[[nodiscard]] ComplexMatrix scrambling_unitary(double alpha);
/// Same gate sequence with every XX and R_Z rotation negated.
[[nodiscard]] ComplexMatrix scrambling_unitary_conjugate(double alpha);

struct SwapSequences {
  std::vector<GateSegment> encoder;  // qubits 1..3
  std::vector<GateSegment> decoder;  // qubits 4..6
};

/// Encoder and decoder parametrized-SWAP segments of the SWAP circuit.
[[nodiscard]] SwapSequences swap_unitary(double alpha);

/// Net 3-qubit unitary of a time-ordered segment list whose sites all lie
/// in first_site..first_site+2.
[[nodiscard]] ComplexMatrix compose_segments(const std::vector<GateSegment>& segments,
                                             int first_site);

void check_alpha(double alpha);

}  // namespace scramblesim
