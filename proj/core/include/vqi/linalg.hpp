#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "vqi/errors.hpp"

namespace vqi {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

// Dense square complex matrix, the carrier for every operator in the
// library. Row-major, double precision. Dimensions stay small (<= ~64),
// so all algorithms are straightforward O(n^2)/O(n^3) loops.
class ComplexMatrix {
 public:
  ComplexMatrix() : dim_(0) {}
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  // |u><u| and |u><w|
  static ComplexMatrix outer(std::span<const Complex> u);
  static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> w);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  const Vector& data() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  Complex trace() const;

  // max_ij |a_ij - b_ij| and max_ij |a_ij|
  double max_abs() const;
  double max_abs_diff(const ComplexMatrix& other) const;
  // ||m - m^dagger||_max
  double hermiticity_defect() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  // m . v
  Vector apply(std::span<const Complex> v) const;
  // <u| m |u>
  Complex expectation(std::span<const Complex> u) const;

 private:
  std::size_t dim_;
  Vector data_;
};

// Ordered subsystem structure of a composite Hilbert space. The declaration
// order fixes the tensor-product ordering; all index arithmetic derives
// from it and kept labels never get reordered.
class CompositeDims {
 public:
  struct Subsystem {
    std::string label;
    std::size_t dim;
  };

  CompositeDims() = default;
  explicit CompositeDims(std::vector<Subsystem> parts);
  static CompositeDims single(const std::string& label, std::size_t dim) {
    return CompositeDims({{label, dim}});
  }
  static CompositeDims qubits(const std::vector<std::string>& labels);

  std::size_t size() const { return parts_.size(); }
  std::size_t total_dim() const;
  const Subsystem& part(std::size_t i) const { return parts_[i]; }
  const std::vector<Subsystem>& parts() const { return parts_; }

  bool contains(const std::string& label) const;
  // index of a label; throws LabelError when absent
  std::size_t index_of(const std::string& label) const;
  std::vector<std::string> labels() const;
  std::vector<std::size_t> dims() const;

  // concatenation (tensor-product extension); throws LabelError on collision
  friend CompositeDims operator+(const CompositeDims& a, const CompositeDims& b);

  // part indices of the given labels, in declaration order of *this*;
  // throws LabelError for unknown labels
  std::vector<std::size_t> indices_of(const std::vector<std::string>& labels) const;
  // subsystems restricted to `keep` part indices (relative order preserved)
  CompositeDims select(const std::vector<std::size_t>& keep) const;
  CompositeDims erase(const std::vector<std::string>& labels) const;

  friend bool operator==(const CompositeDims& a, const CompositeDims& b);

 private:
  std::vector<Subsystem> parts_;
};

// ---------------------------------------------------------------------------
// Operations

// Kronecker product; first argument is the leftmost subsystem.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
Vector kron(std::span<const Complex> a, std::span<const Complex> b);

// Partial trace over everything not in `keep` (part indices, ascending
// relative order preserved).
ComplexMatrix partial_trace_indices(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                    const std::vector<std::size_t>& keep);

// Transpose on one tensor factor.
ComplexMatrix partial_transpose_index(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                      std::size_t which);

// Lift an operator acting on `on` (part indices into dims) to the full space.
ComplexMatrix embed_operator(const ComplexMatrix& op, const std::vector<std::size_t>& dims,
                             const std::vector<std::size_t>& on);

// Reorder tensor factors of a matrix: perm[i] = old index of new position i.
ComplexMatrix permute_subsystems(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                 const std::vector<std::size_t>& perm);

struct EigResult {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // orthonormal columns, vectors.col(k) <-> values[k]
  Vector column(std::size_t k) const;
};

// Hermitian eigendecomposition by cyclic Jacobi rotations. Input must be
// Hermitian within 1e-10 in the max norm, otherwise SymmetryError.
EigResult eig_hermitian(const ComplexMatrix& m);

// 1/2 sum |eig(a - b)|. Throws DimensionError on mismatch.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Hermiticity tolerance shared by the library.
inline constexpr double kHermitianTol = 1e-10;
// Eigenvalues in [-kPsdTol, 0) count as zero.
inline constexpr double kPsdTol = 1e-12;

// Clip eigenvalues in [-kPsdTol, 0) to zero and rescale the positive part so
// the total stays fixed. Eigenvalues below -kPsdTol are a caller error and
// pass through unchanged.
std::vector<double> clip_spectrum(std::vector<double> values);

}  // namespace vqi
