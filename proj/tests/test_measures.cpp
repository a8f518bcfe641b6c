#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "test_support.hpp"
#include "vqi/measures.hpp"
#include "vqi/states.hpp"

using namespace vqi;

namespace {

DensityOp window_op(double theta, double phi) {
  return DensityOp(support::to_matrix(oracle::window_state(theta, phi)),
                   CompositeDims::qubits({"a", "A", "B"}));
}

DensityOp maximally_mixed(const Label& label) {
  ComplexMatrix half(2);
  half(0, 0) = half(1, 1) = 0.5;
  return DensityOp(half, CompositeDims::single(label, 2));
}

}  // namespace

TEST_CASE("entropy of pure, mixed and window states") {
  CHECK(von_neumann_entropy(pure_qubit({1.2, 0.3})) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(maximally_mixed("q")) == doctest::Approx(1.0).epsilon(1e-12));
  // four orthogonal equiprobable branches
  CHECK(von_neumann_entropy(window_op(0.8, 2.6)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("entropy is basis invariant") {
  oracle::Rng rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const DensityOp rho(support::to_matrix(rng.random_density(4)),
                        CompositeDims::qubits({"x", "y"}));
    // random unitary from the eigenvectors of a random Hermitian matrix
    const ComplexMatrix u = eig_hermitian(support::to_matrix(rng.random_hermitian(4))).vectors;
    const DensityOp rotated(u * rho.matrix() * u.adjoint(), rho.dims());
    CHECK(von_neumann_entropy(rotated) ==
          doctest::Approx(von_neumann_entropy(rho)).epsilon(1e-9));
  }
}

TEST_CASE("relative entropy basics and the infinity flag") {
  const DensityOp zero = pure_qubit({0.0, 0.0}, "q");
  const DensityOp one = pure_qubit({M_PI, 0.0}, "q");
  const DensityOp mixed = maximally_mixed("q");

  const RelEntropy same = relative_entropy(mixed, mixed);
  CHECK_FALSE(same.infinite);
  CHECK(same.bits == doctest::Approx(0.0).epsilon(1e-12));

  const RelEntropy pure_vs_mixed = relative_entropy(zero, mixed);
  CHECK_FALSE(pure_vs_mixed.infinite);
  CHECK(pure_vs_mixed.bits == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(relative_entropy(zero, one).infinite);
  CHECK_THROWS_AS(relative_entropy(zero, bell_state({0})), DimensionError);
}

TEST_CASE("relative entropy is nonnegative on random pairs") {
  oracle::Rng rng(43);
  for (int trial = 0; trial < 12; ++trial) {
    const DensityOp a(support::to_matrix(rng.random_density(4)), CompositeDims::qubits({"x", "y"}));
    const DensityOp b(support::to_matrix(rng.random_density(4)), CompositeDims::qubits({"x", "y"}));
    const RelEntropy re = relative_entropy(a, b);
    REQUIRE_FALSE(re.infinite);  // Ginibre states are full rank
    CHECK(re.bits >= 0.0);
  }
}

TEST_CASE("mutual information of product, window and Bell states") {
  oracle::Rng rng(47);
  const DensityOp prod = kron(
      DensityOp(support::to_matrix(rng.random_density(2)), CompositeDims::single("x", 2)),
      DensityOp(support::to_matrix(rng.random_density(2)), CompositeDims::single("y", 2)));
  CHECK(mutual_information(prod, {{"x"}, {"y"}}) == doctest::Approx(0.0).epsilon(1e-10));

  CHECK(mutual_information(window_op(1.9, 0.8), {{"a", "A"}, {"B"}}) ==
        doctest::Approx(1.0).epsilon(1e-10));

  CHECK(mutual_information(bell_state({0}), {{"A"}, {"B"}}) ==
        doctest::Approx(2.0).epsilon(1e-10));

  CHECK_THROWS_AS(mutual_information(prod, {{"x"}, {"x"}}), LabelError);
  CHECK_THROWS_AS(mutual_information(prod, {{"x"}, {}}), LabelError);
}

TEST_CASE("nearest product state: minimizer is the product of marginals") {
  oracle::Rng rng(53);
  const DensityOp prod = kron(
      DensityOp(support::to_matrix(rng.random_density(2)), CompositeDims::single("x", 2)),
      DensityOp(support::to_matrix(rng.random_density(2)), CompositeDims::single("y", 2)));
  const NearestProduct self = nearest_product_relent(prod, {{"x"}, {"y"}});
  CHECK(self.bits == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(self.argmin.matrix().max_abs_diff(prod.matrix()) < 1e-10);

  const DensityOp window = window_op(2.2, 1.4);
  const NearestProduct np = nearest_product_relent(window, {{"a", "A"}, {"B"}});
  CHECK(np.bits == doctest::Approx(1.0).epsilon(1e-9));
  // argmin = I4/4 (x) I2/2
  ComplexMatrix expected = Complex{1.0 / 8.0} * ComplexMatrix::identity(8);
  CHECK(np.argmin.matrix().max_abs_diff(expected) < 1e-12);

  // the charge state: one bit of purely classical correlation
  const DensityOp charge = classical_correlated(2, {"alpha", "beta"});
  CHECK(nearest_product_relent(charge, {{"alpha"}, {"beta"}}).bits ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("perturbation sweep never beats the product of marginals") {
  oracle::Rng rng(59);
  const auto sweep = [&](const DensityOp& rho, const Bipartition& cut) {
    const double mi = mutual_information(rho, cut);
    const DensityOp mx = partial_trace(rho, cut.first);
    const DensityOp my = partial_trace(rho, cut.second);
    int infinite = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const double eps = rng.uniform(0.0, 0.6);
      const oracle::Mat px = rng.random_density(mx.dim());
      const oracle::Mat py = rng.random_density(my.dim());
      ComplexMatrix cx = Complex{1.0 - eps} * mx.matrix() + Complex{eps} * support::to_matrix(px);
      ComplexMatrix cy = Complex{1.0 - eps} * my.matrix() + Complex{eps} * support::to_matrix(py);
      const DensityOp candidate = reorder(
          kron(DensityOp(cx, mx.dims()), DensityOp(cy, my.dims())), rho.dims().labels());
      const RelEntropy re = relative_entropy(rho, candidate);
      if (re.infinite) {
        ++infinite;
        continue;
      }
      CHECK(re.bits >= mi - 1e-6);
    }
    CHECK(infinite == 0);  // perturbed candidates stay full rank
  };

  sweep(window_op(1.0, 0.5), {{"a", "A"}, {"B"}});
  sweep(classical_correlated(2, {"alpha", "beta"}), {{"alpha"}, {"beta"}});
}

TEST_CASE("negativity and the PPT flag") {
  oracle::Rng rng(61);
  const DensityOp prod = kron(
      DensityOp(support::to_matrix(rng.random_density(2)), CompositeDims::single("x", 2)),
      DensityOp(support::to_matrix(rng.random_density(2)), CompositeDims::single("y", 2)));
  const Negativity none = negativity(prod, {{"x"}, {"y"}});
  CHECK(none.value <= 1e-10);
  CHECK(none.ppt);

  const Negativity bell = negativity(bell_state({0}), {{"A"}, {"B"}});
  CHECK(bell.value == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_FALSE(bell.ppt);

  const Negativity window = negativity(window_op(0.9, 4.0), {{"a", "A"}, {"B"}});
  CHECK(window.value <= 1e-10);
  CHECK(window.ppt);
}

TEST_CASE("discord vanishes with the Bell certificate on the measured side") {
  for (double theta : {0.3, 1.5, 2.8}) {
    for (double phi : {0.2, 3.1}) {
      const DensityOp window = window_op(theta, phi);
      const double d = discord_certificate(window, {"a", "A"}, bell_basis());
      CHECK(d >= 0.0);
      CHECK(d <= 1e-9);
    }
  }
}

TEST_CASE("discord of a product state vanishes in both modes") {
  oracle::Rng rng(67);
  const DensityOp prod = kron(
      DensityOp(support::to_matrix(rng.random_density(2)), CompositeDims::single("x", 2)),
      DensityOp(support::to_matrix(rng.random_density(2)), CompositeDims::single("y", 2)));
  const std::vector<ComplexMatrix> comp = {ComplexMatrix::from_rows({{1, 0}, {0, 0}}),
                                           ComplexMatrix::from_rows({{0, 0}, {0, 1}})};
  CHECK(discord_certificate(prod, {"x"}, comp) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(discord_grid(prod, {"x"}, 16) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("discord measured on the receiving side is strictly positive") {
  // generic input angles: the four branch states point along four
  // non-collinear Bloch directions
  const DensityOp window = window_op(1.0471975511965976, 0.6283185307179586);
  const double d = discord_grid(window, {"B"}, 64);
  CHECK(d > 0.05);
  // the certificate at any fixed basis upper-bounds the optimized value
  const std::vector<ComplexMatrix> comp = {ComplexMatrix::from_rows({{1, 0}, {0, 0}}),
                                           ComplexMatrix::from_rows({{0, 0}, {0, 1}})};
  CHECK(discord_certificate(window, {"B"}, comp) >= d - 1e-9);
}

TEST_CASE("certificate validation rejects malformed measurements") {
  const DensityOp window = window_op(1.0, 1.0);
  // not complete
  CHECK_THROWS_AS(
      discord_certificate(window, {"B"}, {ComplexMatrix::from_rows({{1, 0}, {0, 0}})}),
      RangeError);
  // not rank-1
  CHECK_THROWS_AS(discord_certificate(window, {"a", "A"},
                                      {parity_projectors()[0], parity_projectors()[1]}),
                  RangeError);
}

TEST_CASE("negentropy of pure and mixed qubits") {
  CHECK(negentropy(pure_qubit({0.77, 0.2})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(negentropy(maximally_mixed("q")) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fidelity basics and rank-1 enforcement") {
  const DensityOp psi = pure_qubit({0.9, 0.8}, "q");
  CHECK(fidelity(psi, psi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(pure_qubit({0.0, 0.0}, "q"), pure_qubit({M_PI, 0.0}, "q")) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fidelity(psi, maximally_mixed("q")) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(fidelity(maximally_mixed("q"), psi), RangeError);
}

TEST_CASE("classical-quantum states with a qubit side carry at most one bit") {
  oracle::Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    // sum_i p_i |i><i| (x) rho_i with four orthogonal flags
    oracle::Mat cq = oracle::zeros(8);
    std::array<double, 4> weights{};
    double total = 0.0;
    for (auto& w : weights) {
      w = rng.uniform(0.05, 1.0);
      total += w;
    }
    for (int i = 0; i < 4; ++i) {
      const oracle::Mat rho_i = rng.random_density(2);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) cq[i * 2 + r][i * 2 + c] = weights[i] / total * rho_i[r][c];
    }
    const DensityOp state(support::to_matrix(cq),
                          CompositeDims({{"flag", 4}, {"q", 2}}));
    CHECK(mutual_information(state, {{"flag"}, {"q"}}) <= 1.0 + 1e-9);
  }
}
