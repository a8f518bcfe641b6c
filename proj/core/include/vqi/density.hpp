#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vqi/linalg.hpp"

namespace vqi {

using Label = std::string;

// A density matrix tagged with its composite-system structure. Hermiticity
// and unit trace are enforced on construction; positivity is maintained
// structurally by the operations and can be certified with assert_psd().
//
// Pure states built by the constructors in states.hpp keep their amplitude
// vector as an auxiliary field; the matrix stays the source of truth.
class DensityOp {
 public:
  DensityOp() = default;
  DensityOp(ComplexMatrix matrix, CompositeDims dims);
  static DensityOp from_pure(Vector amplitudes, CompositeDims dims);

  const ComplexMatrix& matrix() const { return matrix_; }
  const CompositeDims& dims() const { return dims_; }
  std::size_t dim() const { return matrix_.dim(); }

  // Present only when the state was built as a pure vector.
  const std::optional<Vector>& amplitudes() const { return amplitudes_; }

  // Full spectral positivity check (eigenvalues >= -1e-12); throws RangeError.
  void assert_psd() const;

 private:
  ComplexMatrix matrix_;
  CompositeDims dims_;
  std::optional<Vector> amplitudes_;
};

// Tensor product; amplitude vectors combine when both factors carry one.
DensityOp kron(const DensityOp& a, const DensityOp& b);

// Reduced state on `keep` (declaration order of rho preserved, regardless of
// the order labels are listed in). Unknown labels raise LabelError.
DensityOp partial_trace(const DensityOp& rho, const std::vector<Label>& keep);

// Transpose on a single subsystem, or on a block (composition of the
// single-label transposes). The result is Hermitian and unit trace but in
// general not positive.
ComplexMatrix partial_transpose(const DensityOp& rho, const Label& subsystem);
ComplexMatrix partial_transpose(const DensityOp& rho, const std::vector<Label>& block);

double trace_distance(const DensityOp& rho, const DensityOp& sigma);

// Reorder subsystems into `order` (a permutation of rho's labels).
DensityOp reorder(const DensityOp& rho, const std::vector<Label>& order);

}  // namespace vqi
