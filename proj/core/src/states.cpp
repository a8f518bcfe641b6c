#include "vqi/states.hpp"

#include <cmath>
#include <numbers>

namespace vqi {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

std::vector<Label> default_labels(int n, const std::vector<Label>& given, const char* stem) {
  if (!given.empty()) {
    if (static_cast<int>(given.size()) != n) throw LabelError("label list does not match n");
    return given;
  }
  std::vector<Label> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back(std::string(stem) + std::to_string(k));
  return out;
}
}  // namespace

void PureQubitParams::validate() const {
  if (!(theta >= 0.0 && theta <= kPi))
    throw RangeError("theta must lie in [0, pi], got " + std::to_string(theta));
  if (!(phi >= 0.0 && phi < 2.0 * kPi))
    throw RangeError("phi must lie in [0, 2*pi), got " + std::to_string(phi));
}

void BellIndex::validate() const {
  if (i < 0 || i > 3) throw RangeError("Bell index must be in {0,1,2,3}");
}

ComplexMatrix pauli(PauliAxis which) {
  switch (which) {
    case PauliAxis::x:
      return ComplexMatrix::from_rows({{0, 1}, {1, 0}});
    case PauliAxis::y:
      return ComplexMatrix::from_rows({{0, -kI}, {kI, 0}});
    case PauliAxis::z:
      return ComplexMatrix::from_rows({{1, 0}, {0, -1}});
  }
  throw RangeError("unknown Pauli axis");
}

ComplexMatrix qubit_identity() { return ComplexMatrix::identity(2); }

Vector pure_qubit_amplitudes(const PureQubitParams& p) {
  p.validate();
  return {std::cos(p.theta / 2.0), std::exp(kI * p.phi) * std::sin(p.theta / 2.0)};
}

DensityOp pure_qubit(const PureQubitParams& p, const Label& label) {
  return DensityOp::from_pure(pure_qubit_amplitudes(p), CompositeDims::single(label, 2));
}

Vector bell_amplitudes(BellIndex idx) {
  idx.validate();
  const double r = 1.0 / std::sqrt(2.0);
  switch (idx.i) {
    case 0: return {r, 0, 0, r};    // Phi+
    case 1: return {r, 0, 0, -r};   // Phi-
    case 2: return {0, r, r, 0};    // Psi+
    default: return {0, r, -r, 0};  // Psi-
  }
}

DensityOp bell_state(BellIndex idx, const Label& left, const Label& right) {
  return DensityOp::from_pure(bell_amplitudes(idx), CompositeDims::qubits({left, right}));
}

std::vector<ComplexMatrix> bell_basis() {
  std::vector<ComplexMatrix> out;
  out.reserve(4);
  for (int i = 0; i < 4; ++i) out.push_back(ComplexMatrix::outer(bell_amplitudes({i})));
  return out;
}

ComplexMatrix bell_correction(BellIndex idx) {
  idx.validate();
  switch (idx.i) {
    case 0: return qubit_identity();
    case 1: return pauli(PauliAxis::z);
    case 2: return pauli(PauliAxis::x);
    default: return pauli(PauliAxis::y);
  }
}

DensityOp ghz(int n, const std::vector<Label>& labels) {
  if (n < 2 || n > 5) throw RangeError("ghz: n must lie in [2, 5]");
  const std::size_t dim = std::size_t{1} << n;
  Vector amps(dim);
  amps.front() = 1.0 / std::sqrt(2.0);
  amps.back() = 1.0 / std::sqrt(2.0);
  return DensityOp::from_pure(std::move(amps),
                              CompositeDims::qubits(default_labels(n, labels, "G")));
}

DensityOp classical_correlated(int n, const std::vector<Label>& labels) {
  if (n < 2 || n > 5) throw RangeError("classical_correlated: n must lie in [2, 5]");
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix m(dim);
  m(0, 0) = 0.5;
  m(dim - 1, dim - 1) = 0.5;
  return DensityOp(std::move(m), CompositeDims::qubits(default_labels(n, labels, "C")));
}

DensityOp classical_mixture(double p, const Label& label) {
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError("classical_mixture: p must lie in [0, 1]");
  ComplexMatrix m(2);
  m(0, 0) = p;
  m(1, 1) = 1.0 - p;
  return DensityOp(std::move(m), CompositeDims::single(label, 2));
}

DensityOp mixed_input(double p, const PureQubitParams& psi, const Label& label) {
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError("mixed_input: p must lie in [0, 1]");
  const Vector amps = pure_qubit_amplitudes(psi);
  ComplexMatrix m = Complex{p} * ComplexMatrix::outer(amps) +
                    Complex{(1.0 - p) * 0.5} * ComplexMatrix::identity(2);
  return DensityOp(std::move(m), CompositeDims::single(label, 2));
}

DensityOp psi_pair(const PureQubitParams& p, const Label& left, const Label& right) {
  p.validate();
  const Complex c = std::cos(p.theta / 2.0);
  const Complex s = std::sin(p.theta / 2.0);
  const Complex e = std::exp(kI * p.phi);
  const Vector psi = {c, e * s};
  const Vector perp = {s, -e * c};
  Vector amps(4);
  const Vector pp = kron(std::span<const Complex>(psi), std::span<const Complex>(psi));
  const Vector qq = kron(std::span<const Complex>(perp), std::span<const Complex>(perp));
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t k = 0; k < 4; ++k) amps[k] = r * (pp[k] + qq[k]);
  return DensityOp::from_pure(std::move(amps), CompositeDims::qubits({left, right}));
}

std::vector<ComplexMatrix> parity_projectors() {
  ComplexMatrix even(4), odd(4);
  even(0, 0) = 1.0;
  even(3, 3) = 1.0;
  odd(1, 1) = 1.0;
  odd(2, 2) = 1.0;
  return {even, odd};
}

}  // namespace vqi
