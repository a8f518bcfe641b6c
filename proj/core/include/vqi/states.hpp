#pragma once

#include "vqi/density.hpp"

namespace vqi {

// Bloch-sphere parametrization of a pure qubit:
//   |psi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
// Ranges are enforced exactly; out-of-range values raise RangeError rather
// than wrapping.
struct PureQubitParams {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2*pi)

  void validate() const;
};

// Index into the Bell basis: 0 -> Phi+, 1 -> Phi-, 2 -> Psi+, 3 -> Psi-.
// The correction map is frozen as 0 -> I, 1 -> sigma_z, 2 -> sigma_x,
// 3 -> sigma_y.
struct BellIndex {
  int i = 0;

  void validate() const;
};

enum class PauliAxis { x, y, z };

ComplexMatrix pauli(PauliAxis which);
ComplexMatrix qubit_identity();

// |psi><psi| on one qubit with the amplitude vector retained.
DensityOp pure_qubit(const PureQubitParams& p, const Label& label = "a");
Vector pure_qubit_amplitudes(const PureQubitParams& p);

// The four maximally entangled two-qubit states and their projectors.
DensityOp bell_state(BellIndex i, const Label& left = "A", const Label& right = "B");
Vector bell_amplitudes(BellIndex i);
std::vector<ComplexMatrix> bell_basis();

// Correction unitary for Bell outcome i: {I, sigma_z, sigma_x, sigma_y}.
ComplexMatrix bell_correction(BellIndex i);

// (|0...0> + |1...1>)/sqrt(2) on n qubits, 2 <= n <= 5.
DensityOp ghz(int n, const std::vector<Label>& labels = {});

// (|0...0><0...0| + |1...1><1...1|)/2 on n systems, 2 <= n <= 5.
DensityOp classical_correlated(int n, const std::vector<Label>& labels = {});

// p|0><0| + (1-p)|1><1|
DensityOp classical_mixture(double p, const Label& label = "src");

// p |psi><psi| + (1-p) I/2
DensityOp mixed_input(double p, const PureQubitParams& psi, const Label& label = "a");

// (|psi psi> + |psi_perp psi_perp>)/sqrt(2) with
// |psi_perp> = sin(theta/2)|0> - e^{i phi} cos(theta/2)|1>.
DensityOp psi_pair(const PureQubitParams& p, const Label& left = "A", const Label& right = "B");

// Parity projectors on two qubits: even = span{|00>,|11>}, odd = span{|01>,|10>}.
std::vector<ComplexMatrix> parity_projectors();

}  // namespace vqi
