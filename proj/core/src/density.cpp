#include "vqi/density.hpp"

#include <cmath>

namespace vqi {

namespace {
constexpr double kTraceTol = 1e-10;
}

DensityOp::DensityOp(ComplexMatrix matrix, CompositeDims dims)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  if (matrix_.dim() != dims_.total_dim())
    throw DimensionError("DensityOp: matrix dimension does not match subsystem dims");
  if (!matrix_.all_finite()) throw RangeError("DensityOp: non-finite entries");
  if (matrix_.hermiticity_defect() > kHermitianTol)
    throw SymmetryError("DensityOp: matrix is not Hermitian within tolerance");
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > kTraceTol)
    throw RangeError("DensityOp: trace differs from 1");
}

DensityOp DensityOp::from_pure(Vector amplitudes, CompositeDims dims) {
  double norm2 = 0.0;
  for (const Complex& a : amplitudes) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > kTraceTol) throw RangeError("from_pure: vector is not normalized");
  DensityOp op(ComplexMatrix::outer(amplitudes), std::move(dims));
  op.amplitudes_ = std::move(amplitudes);
  return op;
}

void DensityOp::assert_psd() const {
  const EigResult eig = eig_hermitian(matrix_);
  for (double v : eig.values)
    if (v < -kPsdTol) throw RangeError("DensityOp: negative eigenvalue " + std::to_string(v));
}

DensityOp kron(const DensityOp& a, const DensityOp& b) {
  DensityOp out(kron(a.matrix(), b.matrix()), a.dims() + b.dims());
  if (a.amplitudes() && b.amplitudes()) {
    DensityOp pure = DensityOp::from_pure(kron(std::span<const Complex>(*a.amplitudes()),
                                               std::span<const Complex>(*b.amplitudes())),
                                          out.dims());
    return pure;
  }
  return out;
}

DensityOp partial_trace(const DensityOp& rho, const std::vector<Label>& keep) {
  const std::vector<std::size_t> idx = rho.dims().indices_of(keep);
  ComplexMatrix reduced = partial_trace_indices(rho.matrix(), rho.dims().dims(), idx);
  return DensityOp(std::move(reduced), rho.dims().select(idx));
}

ComplexMatrix partial_transpose(const DensityOp& rho, const Label& subsystem) {
  return partial_transpose_index(rho.matrix(), rho.dims().dims(), rho.dims().index_of(subsystem));
}

ComplexMatrix partial_transpose(const DensityOp& rho, const std::vector<Label>& block) {
  ComplexMatrix out = rho.matrix();
  const std::vector<std::size_t> dims = rho.dims().dims();
  for (const Label& l : block) out = partial_transpose_index(out, dims, rho.dims().index_of(l));
  return out;
}

double trace_distance(const DensityOp& rho, const DensityOp& sigma) {
  if (!(rho.dims() == sigma.dims()))
    throw DimensionError("trace_distance: subsystem structures differ");
  return trace_distance(rho.matrix(), sigma.matrix());
}

DensityOp reorder(const DensityOp& rho, const std::vector<Label>& order) {
  if (order.size() != rho.dims().size()) throw LabelError("reorder: order must list every label");
  std::vector<std::size_t> perm;
  perm.reserve(order.size());
  for (const Label& l : order) perm.push_back(rho.dims().index_of(l));
  ComplexMatrix m = permute_subsystems(rho.matrix(), rho.dims().dims(), perm);
  return DensityOp(std::move(m), rho.dims().select(perm));
}

}  // namespace vqi
