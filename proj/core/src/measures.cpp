#include "vqi/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace vqi {

namespace {

constexpr double kLog2SupportTol = 1e-12;  // sigma eigenvalues below this count as null space
constexpr double kSupportWeightTol = 1e-9;

double entropy_of_spectrum(const std::vector<double>& raw) {
  std::vector<double> values = clip_spectrum(raw);
  double s = 0.0;
  for (double v : values) {
    if (v < -kPsdTol) throw RangeError("entropy: spectrum has negative eigenvalue");
    if (v > 0.0) s -= v * std::log2(v);
  }
  return s;
}

double entropy_of_matrix(const ComplexMatrix& m) {
  return entropy_of_spectrum(eig_hermitian(m).values);
}

std::string render_labels(const std::vector<Label>& labels) {
  std::string out = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ",";
    out += labels[i];
  }
  return out + "}";
}

// Shared machinery for discord/classical correlation: measure `side` with
// the given projectors, return p_m and the conditional states of the rest.
struct MeasuredEnsemble {
  std::vector<double> probs;
  std::vector<ComplexMatrix> conditional_rest;
  ComplexMatrix rest_marginal;
};

MeasuredEnsemble measure_side(const DensityOp& rho, const std::vector<Label>& side,
                              const std::vector<ComplexMatrix>& projectors) {
  const std::vector<std::size_t> side_idx = rho.dims().indices_of(side);
  std::vector<std::size_t> rest_idx;
  for (std::size_t i = 0; i < rho.dims().size(); ++i)
    if (std::find(side_idx.begin(), side_idx.end(), i) == side_idx.end()) rest_idx.push_back(i);
  if (rest_idx.empty()) throw LabelError("measured side must leave a nonempty remainder");

  const std::vector<std::size_t> dims = rho.dims().dims();
  std::size_t side_dim = 1;
  for (std::size_t i : side_idx) side_dim *= dims[i];

  // Validate: rank-1, Hermitian, orthonormal, complete.
  ComplexMatrix sum = ComplexMatrix::zero(side_dim);
  for (const ComplexMatrix& p : projectors) {
    if (p.dim() != side_dim) throw DimensionError("projector dimension does not match measured side");
    if (p.hermiticity_defect() > kHermitianTol) throw SymmetryError("projector is not Hermitian");
    if ((p * p).max_abs_diff(p) > kHermitianTol) throw RangeError("projector is not idempotent");
    if (std::abs(p.trace() - Complex{1.0}) > 1e-9) throw RangeError("projector is not rank-1");
    sum += p;
  }
  if (sum.max_abs_diff(ComplexMatrix::identity(side_dim)) > kHermitianTol)
    throw RangeError("projectors do not sum to the identity");

  MeasuredEnsemble out;
  for (const ComplexMatrix& p : projectors) {
    const ComplexMatrix lifted = embed_operator(p, dims, side_idx);
    const ComplexMatrix post = lifted * rho.matrix() * lifted;
    const double prob = post.trace().real();
    ComplexMatrix cond = partial_trace_indices(post, dims, rest_idx);
    if (prob > 1e-14) cond *= Complex{1.0 / prob};
    out.probs.push_back(std::max(prob, 0.0));
    out.conditional_rest.push_back(std::move(cond));
  }
  out.rest_marginal = partial_trace_indices(rho.matrix(), dims, rest_idx);
  return out;
}

}  // namespace

void validate_cut(const DensityOp& rho, const Bipartition& cut) {
  if (cut.first.empty() || cut.second.empty())
    throw LabelError("bipartition sides must be nonempty");
  std::set<Label> seen;
  for (const Label& l : cut.first) {
    rho.dims().index_of(l);
    if (!seen.insert(l).second) throw LabelError("bipartition repeats label '" + l + "'");
  }
  for (const Label& l : cut.second) {
    rho.dims().index_of(l);
    if (!seen.insert(l).second) throw LabelError("bipartition repeats label '" + l + "'");
  }
  if (seen.size() != rho.dims().size())
    throw LabelError("bipartition does not cover every subsystem");
}

double von_neumann_entropy(const DensityOp& rho) { return entropy_of_matrix(rho.matrix()); }

RelEntropy relative_entropy(const DensityOp& rho, const DensityOp& sigma) {
  if (!(rho.dims() == sigma.dims()))
    throw DimensionError("relative_entropy: subsystem structures differ");

  const EigResult sig = eig_hermitian(sigma.matrix());
  double null_weight = 0.0;
  double cross = 0.0;  // tr rho log2 sigma over the supported part
  for (std::size_t k = 0; k < sig.values.size(); ++k) {
    const Vector w = sig.column(k);
    const double weight = std::max(rho.matrix().expectation(w).real(), 0.0);
    if (sig.values[k] < kLog2SupportTol) {
      null_weight += weight;
    } else {
      cross += weight * std::log2(sig.values[k]);
    }
  }
  if (null_weight > kSupportWeightTol) return {0.0, true};

  const double value = -von_neumann_entropy(rho) - cross;
  return {value < 0.0 && value > -1e-9 ? 0.0 : value, false};
}

double mutual_information(const DensityOp& rho, const Bipartition& cut) {
  validate_cut(rho, cut);
  const DensityOp x = partial_trace(rho, cut.first);
  const DensityOp y = partial_trace(rho, cut.second);
  return von_neumann_entropy(x) + von_neumann_entropy(y) - von_neumann_entropy(rho);
}

NearestProduct nearest_product_relent(const DensityOp& rho, const Bipartition& cut) {
  validate_cut(rho, cut);
  const DensityOp x = partial_trace(rho, cut.first);
  const DensityOp y = partial_trace(rho, cut.second);
  DensityOp product = reorder(kron(x, y), rho.dims().labels());
  const RelEntropy re = relative_entropy(rho, product);
  // rho's support always lies inside the support of its marginal product
  const double bits = re.infinite ? mutual_information(rho, cut) : re.bits;
  return {bits, std::move(product)};
}

Negativity negativity(const DensityOp& rho, const Bipartition& cut) {
  validate_cut(rho, cut);
  const ComplexMatrix pt = partial_transpose(rho, cut.second);
  const EigResult eig = eig_hermitian(pt);
  double neg = 0.0;
  for (double v : eig.values)
    if (v < 0.0) neg += -v;
  return {neg, neg <= 1e-10};
}

double classical_correlation(const DensityOp& rho, const std::vector<Label>& measured_side,
                             const std::vector<ComplexMatrix>& projectors) {
  const MeasuredEnsemble e = measure_side(rho, measured_side, projectors);
  double avg_cond = 0.0;
  for (std::size_t m = 0; m < e.probs.size(); ++m)
    if (e.probs[m] > 1e-14) avg_cond += e.probs[m] * entropy_of_matrix(e.conditional_rest[m]);
  return entropy_of_matrix(e.rest_marginal) - avg_cond;
}

namespace {

double discord_from_correlation(const DensityOp& rho, const std::vector<Label>& measured_side,
                                double correlation) {
  std::vector<Label> rest;
  for (const Label& l : rho.dims().labels())
    if (std::find(measured_side.begin(), measured_side.end(), l) == measured_side.end())
      rest.push_back(l);
  const double mi = mutual_information(rho, {measured_side, rest});
  const double d = mi - correlation;
  return d < 0.0 && d > -kPsdTol ? 0.0 : d;
}

}  // namespace

double discord_certificate(const DensityOp& rho, const std::vector<Label>& measured_side,
                           const std::vector<ComplexMatrix>& projectors) {
  return discord_from_correlation(rho, measured_side,
                                  classical_correlation(rho, measured_side, projectors));
}

double discord_grid(const DensityOp& rho, const std::vector<Label>& measured_side,
                    std::size_t resolution) {
  if (measured_side.size() != 1 || rho.dims().part(rho.dims().index_of(measured_side[0])).dim != 2)
    throw LabelError("grid search supports only a single-qubit measured side");
  if (resolution < 2) throw RangeError("grid resolution must be at least 2");

  constexpr double pi = std::numbers::pi;
  double best = 0.0;
  for (std::size_t j = 0; j < resolution; ++j) {
    const double theta = pi * static_cast<double>(j) / static_cast<double>(resolution - 1);
    for (std::size_t k = 0; k < resolution; ++k) {
      const double phi = 2.0 * pi * static_cast<double>(k) / static_cast<double>(resolution);
      const Complex e = std::exp(Complex{0.0, phi});
      const Vector m0 = {std::cos(theta / 2.0), e * std::sin(theta / 2.0)};
      const Vector m1 = {std::sin(theta / 2.0), -e * std::cos(theta / 2.0)};
      const double j_val = classical_correlation(
          rho, measured_side, {ComplexMatrix::outer(m0), ComplexMatrix::outer(m1)});
      best = std::max(best, j_val);
    }
  }
  return discord_from_correlation(rho, measured_side, best);
}

double negentropy(const DensityOp& rho) {
  return std::log2(static_cast<double>(rho.dim())) - von_neumann_entropy(rho);
}

double fidelity(const DensityOp& psi, const DensityOp& rho) {
  if (!(psi.dims() == rho.dims())) throw DimensionError("fidelity: subsystem structures differ");
  Vector amps;
  if (psi.amplitudes()) {
    amps = *psi.amplitudes();
  } else {
    const EigResult eig = eig_hermitian(psi.matrix());
    if (eig.values.empty() || eig.values[0] < 1.0 - 1e-9)
      throw RangeError("fidelity: first argument is not rank-1");
    amps = eig.column(0);
  }
  const double f = rho.matrix().expectation(amps).real();
  return std::clamp(f, 0.0, 1.0);
}

CorrelationProfile correlation_profile(const DensityOp& rho, const Bipartition& cut,
                                       const std::vector<Label>& discord_side,
                                       const std::vector<ComplexMatrix>& discord_projectors) {
  CorrelationProfile p;
  p.mutual_information_bits = mutual_information(rho, cut);
  p.nearest_product_relent_bits = nearest_product_relent(rho, cut).bits;
  const Negativity n = negativity(rho, cut);
  p.negativity = n.value;
  p.ppt = n.ppt;
  p.classical_correlation_bits = classical_correlation(rho, discord_side, discord_projectors);
  p.discord_bits = discord_from_correlation(rho, discord_side, p.classical_correlation_bits);
  p.discord_side = render_labels(discord_side);
  p.discord_mode = "certificate";
  return p;
}

}  // namespace vqi
