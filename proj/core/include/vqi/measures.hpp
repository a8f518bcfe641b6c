#pragma once

#include <string>
#include <vector>

#include "vqi/density.hpp"

namespace vqi {

// All quantities are reported in bits (logarithms base 2).

// An ordered bipartition of a state's labels. Both sides must be nonempty
// and together cover every label exactly once.
struct Bipartition {
  std::vector<Label> first;
  std::vector<Label> second;
};

void validate_cut(const DensityOp& rho, const Bipartition& cut);

// -sum lambda log2 lambda over the clipped spectrum (0 log 0 = 0).
double von_neumann_entropy(const DensityOp& rho);

// Relative entropy with a tagged infinity: the flag is set when rho has
// weight above 1e-9 on the near-null space of sigma (eigenvalues < 1e-12).
struct RelEntropy {
  double bits = 0.0;
  bool infinite = false;
};

RelEntropy relative_entropy(const DensityOp& rho, const DensityOp& sigma);

// S(X) + S(Y) - S(XY)
double mutual_information(const DensityOp& rho, const Bipartition& cut);

// Relative entropy to the nearest product state across the cut. The
// minimizer is the product of the marginals; the returned pair carries it
// so the caller can run perturbation sweeps around it.
struct NearestProduct {
  double bits = 0.0;
  DensityOp argmin;
};

NearestProduct nearest_product_relent(const DensityOp& rho, const Bipartition& cut);

// Sum of |negative eigenvalues| of the partial transpose across the cut.
struct Negativity {
  double value = 0.0;
  bool ppt = true;  // value <= 1e-10
};

Negativity negativity(const DensityOp& rho, const Bipartition& cut);

// Quantum discord  I(X:Y) - max_M J(M)  with M a rank-1 projective
// measurement on the measured side.
//
// certificate: evaluates one supplied measurement (projectors over the
// measured side, validated rank-1 orthonormal complete) and returns
// I - J(M), an upper bound on the discord.
//
// grid:        scans projective qubit bases parametrized by Bloch angles on
// a uniform grid; the measured side must be a single qubit.
double discord_certificate(const DensityOp& rho, const std::vector<Label>& measured_side,
                           const std::vector<ComplexMatrix>& projectors);
double discord_grid(const DensityOp& rho, const std::vector<Label>& measured_side,
                    std::size_t resolution = 64);

// J(M): the classical correlation extracted by one measurement,
// S(rho_other) - sum_m p_m S(rho_other | m).
double classical_correlation(const DensityOp& rho, const std::vector<Label>& measured_side,
                             const std::vector<ComplexMatrix>& projectors);

// log2(dim) - S(rho): the work-extraction proxy.
double negentropy(const DensityOp& rho);

// <psi| rho |psi>; psi must be rank-1 (RangeError otherwise).
double fidelity(const DensityOp& psi, const DensityOp& rho);

// Everything condition (ii) reports for one state and cut.
struct CorrelationProfile {
  double mutual_information_bits = 0.0;
  double nearest_product_relent_bits = 0.0;
  double negativity = 0.0;
  bool ppt = true;
  double discord_bits = 0.0;
  std::string discord_side;  // rendered label set
  std::string discord_mode;  // "certificate" or "grid"
  double classical_correlation_bits = 0.0;
};

CorrelationProfile correlation_profile(const DensityOp& rho, const Bipartition& cut,
                                       const std::vector<Label>& discord_side,
                                       const std::vector<ComplexMatrix>& discord_projectors);

}  // namespace vqi
