#include "vqi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vqi {

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t dim = rows.size();
  ComplexMatrix m(dim);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != dim) throw DimensionError("from_rows: matrix must be square");
    std::size_t c = 0;
    for (const Complex& v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> u) { return outer(u, u); }

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> u, std::span<const Complex> w) {
  if (u.size() != w.size()) throw DimensionError("outer: vector lengths differ");
  ComplexMatrix m(u.size());
  for (std::size_t r = 0; r < u.size(); ++r)
    for (std::size_t c = 0; c < w.size(); ++c) m(r, c) = u[r] * std::conj(w[c]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(r, c) = std::conj((*this)(c, r));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(r, c) = (*this)(c, r);
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  if (dim_ != other.dim_) throw DimensionError("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

double ComplexMatrix::hermiticity_defect() const {
  double m = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r; c < dim_; ++c)
      m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const Complex& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (dim_ != other.dim_) throw DimensionError("operator+: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (dim_ != other.dim_) throw DimensionError("operator-: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (Complex& v : data_) v *= scalar;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator*: dimension mismatch");
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
    }
  return out;
}

Vector ComplexMatrix::apply(std::span<const Complex> v) const {
  if (v.size() != dim_) throw DimensionError("apply: vector length mismatch");
  Vector out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

Complex ComplexMatrix::expectation(std::span<const Complex> u) const {
  const Vector mu = apply(u);
  Complex acc = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) acc += std::conj(u[i]) * mu[i];
  return acc;
}

// ---------------------------------------------------------------------------
// CompositeDims

CompositeDims::CompositeDims(std::vector<Subsystem> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i].dim == 0) throw RangeError("CompositeDims: zero-dimensional subsystem");
    for (std::size_t j = i + 1; j < parts_.size(); ++j)
      if (parts_[i].label == parts_[j].label)
        throw LabelError("CompositeDims: duplicate label '" + parts_[i].label + "'");
  }
}

CompositeDims CompositeDims::qubits(const std::vector<std::string>& labels) {
  std::vector<Subsystem> parts;
  parts.reserve(labels.size());
  for (const auto& l : labels) parts.push_back({l, 2});
  return CompositeDims(std::move(parts));
}

std::size_t CompositeDims::total_dim() const {
  std::size_t d = 1;
  for (const auto& p : parts_) d *= p.dim;
  return d;
}

bool CompositeDims::contains(const std::string& label) const {
  for (const auto& p : parts_)
    if (p.label == label) return true;
  return false;
}

std::size_t CompositeDims::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (parts_[i].label == label) return i;
  throw LabelError("unknown subsystem label '" + label + "'");
}

std::vector<std::string> CompositeDims::labels() const {
  std::vector<std::string> out;
  out.reserve(parts_.size());
  for (const auto& p : parts_) out.push_back(p.label);
  return out;
}

std::vector<std::size_t> CompositeDims::dims() const {
  std::vector<std::size_t> out;
  out.reserve(parts_.size());
  for (const auto& p : parts_) out.push_back(p.dim);
  return out;
}

CompositeDims operator+(const CompositeDims& a, const CompositeDims& b) {
  std::vector<CompositeDims::Subsystem> parts = a.parts_;
  for (const auto& p : b.parts_) {
    if (a.contains(p.label)) throw LabelError("CompositeDims: duplicate label '" + p.label + "'");
    parts.push_back(p);
  }
  return CompositeDims(std::move(parts));
}

std::vector<std::size_t> CompositeDims::indices_of(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> idx;
  idx.reserve(labels.size());
  for (const auto& l : labels) idx.push_back(index_of(l));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.size() != labels.size()) throw LabelError("duplicate label in selection");
  return idx;
}

CompositeDims CompositeDims::select(const std::vector<std::size_t>& keep) const {
  std::vector<Subsystem> parts;
  parts.reserve(keep.size());
  for (std::size_t i : keep) parts.push_back(parts_.at(i));
  return CompositeDims(std::move(parts));
}

CompositeDims CompositeDims::erase(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> drop = indices_of(labels);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (!std::binary_search(drop.begin(), drop.end(), i)) keep.push_back(i);
  return select(keep);
}

bool operator==(const CompositeDims& a, const CompositeDims& b) {
  if (a.parts_.size() != b.parts_.size()) return false;
  for (std::size_t i = 0; i < a.parts_.size(); ++i)
    if (a.parts_[i].label != b.parts_[i].label || a.parts_[i].dim != b.parts_[i].dim) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Tensor operations

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.all_finite() || !b.all_finite()) throw RangeError("kron: non-finite entries");
  const std::size_t da = a.dim(), db = b.dim();
  ComplexMatrix out(da * db);
  for (std::size_t ra = 0; ra < da; ++ra)
    for (std::size_t ca = 0; ca < da; ++ca) {
      const Complex v = a(ra, ca);
      if (v == Complex{}) continue;
      for (std::size_t rb = 0; rb < db; ++rb)
        for (std::size_t cb = 0; cb < db; ++cb)
          out(ra * db + rb, ca * db + cb) = v * b(rb, cb);
    }
  return out;
}

Vector kron(std::span<const Complex> a, std::span<const Complex> b) {
  Vector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// Row-major strides: index = sum_k digit_k * stride_k.
std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

void decompose(std::size_t index, const std::vector<std::size_t>& dims, std::vector<std::size_t>& digits) {
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
}

}  // namespace

ComplexMatrix partial_trace_indices(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                    const std::vector<std::size_t>& keep) {
  if (m.dim() != product(dims)) throw DimensionError("partial_trace: dims do not match matrix");
  std::vector<std::size_t> drop;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) drop.push_back(i);

  const std::vector<std::size_t> strides = strides_of(dims);
  std::vector<std::size_t> keep_dims, drop_dims;
  for (std::size_t i : keep) keep_dims.push_back(dims.at(i));
  for (std::size_t i : drop) drop_dims.push_back(dims[i]);
  const std::size_t dk = product(keep_dims);
  const std::size_t dd = product(drop_dims);

  // Global index of a (kept digits, dropped digits) pair.
  auto global = [&](std::size_t kept_multi, std::size_t drop_multi) {
    std::size_t idx = 0;
    for (std::size_t k = keep.size(); k-- > 0;) {
      idx += (kept_multi % keep_dims[k]) * strides[keep[k]];
      kept_multi /= keep_dims[k];
    }
    for (std::size_t k = drop.size(); k-- > 0;) {
      idx += (drop_multi % drop_dims[k]) * strides[drop[k]];
      drop_multi /= drop_dims[k];
    }
    return idx;
  };

  ComplexMatrix out(dk);
  for (std::size_t r = 0; r < dk; ++r)
    for (std::size_t c = 0; c < dk; ++c) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < dd; ++t) acc += m(global(r, t), global(c, t));
      out(r, c) = acc;
    }
  return out;
}

ComplexMatrix partial_transpose_index(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                      std::size_t which) {
  if (m.dim() != product(dims)) throw DimensionError("partial_transpose: dims do not match matrix");
  if (which >= dims.size()) throw LabelError("partial_transpose: subsystem index out of range");
  const std::vector<std::size_t> strides = strides_of(dims);
  const std::size_t n = m.dim();
  ComplexMatrix out(n);
  std::vector<std::size_t> rd(dims.size()), cd(dims.size());
  for (std::size_t r = 0; r < n; ++r) {
    decompose(r, dims, rd);
    for (std::size_t c = 0; c < n; ++c) {
      decompose(c, dims, cd);
      const std::size_t rs = r - rd[which] * strides[which] + cd[which] * strides[which];
      const std::size_t cs = c - cd[which] * strides[which] + rd[which] * strides[which];
      out(rs, cs) = m(r, c);
    }
  }
  return out;
}

ComplexMatrix embed_operator(const ComplexMatrix& op, const std::vector<std::size_t>& dims,
                             const std::vector<std::size_t>& on) {
  std::vector<std::size_t> on_dims;
  for (std::size_t i : on) on_dims.push_back(dims.at(i));
  if (op.dim() != product(on_dims)) throw DimensionError("embed_operator: operator does not fit target");
  const std::vector<std::size_t> strides = strides_of(dims);
  const std::size_t n = product(dims);
  const std::size_t dop = op.dim();

  // Offset of each sub-block index inside the global index.
  std::vector<std::size_t> offsets(dop);
  for (std::size_t s = 0; s < dop; ++s) {
    std::size_t rest = s, off = 0;
    for (std::size_t k = on.size(); k-- > 0;) {
      off += (rest % on_dims[k]) * strides[on[k]];
      rest /= on_dims[k];
    }
    offsets[s] = off;
  }

  ComplexMatrix out(n);
  // Enumerate the complement space once and stamp the operator block.
  for (std::size_t base = 0; base < n; ++base) {
    // base must have zero digits on the acted subsystems
    bool zero_on = true;
    for (std::size_t k = 0; k < on.size(); ++k)
      if ((base / strides[on[k]]) % dims[on[k]] != 0) {
        zero_on = false;
        break;
      }
    if (!zero_on) continue;
    for (std::size_t r = 0; r < dop; ++r)
      for (std::size_t c = 0; c < dop; ++c) out(base + offsets[r], base + offsets[c]) = op(r, c);
  }
  return out;
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                 const std::vector<std::size_t>& perm) {
  if (m.dim() != product(dims)) throw DimensionError("permute_subsystems: dims do not match matrix");
  if (perm.size() != dims.size()) throw DimensionError("permute_subsystems: bad permutation");
  std::vector<std::size_t> new_dims(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) new_dims[i] = dims.at(perm[i]);
  const std::vector<std::size_t> old_strides = strides_of(dims);
  const std::size_t n = m.dim();

  // new multi-index -> old flat index
  std::vector<std::size_t> map(n);
  std::vector<std::size_t> digits(perm.size());
  for (std::size_t i = 0; i < n; ++i) {
    decompose(i, new_dims, digits);
    std::size_t old_index = 0;
    for (std::size_t k = 0; k < perm.size(); ++k) old_index += digits[k] * old_strides[perm[k]];
    map[i] = old_index;
  }
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(r, c) = m(map[r], map[c]);
  return out;
}

// ---------------------------------------------------------------------------
// Eigendecomposition

Vector EigResult::column(std::size_t k) const {
  Vector v(vectors.dim());
  for (std::size_t r = 0; r < vectors.dim(); ++r) v[r] = vectors(r, k);
  return v;
}

EigResult eig_hermitian(const ComplexMatrix& m) {
  if (!m.all_finite()) throw RangeError("eig_hermitian: non-finite entries");
  if (m.hermiticity_defect() > kHermitianTol)
    throw SymmetryError("eig_hermitian: matrix is not Hermitian within tolerance");

  const std::size_t n = m.dim();
  // Work on the symmetrized copy so roundoff asymmetry cannot accumulate.
  ComplexMatrix a(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(a.max_abs(), 1e-300);
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= 1e-15 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double absb = std::abs(apq);
        if (absb <= 1e-300) continue;
        const Complex phase = apq / absb;  // e^{i beta}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double mu = (app - aqq) / (2.0 * absb);
        double t;  // tangent of the rotation angle, smaller root
        if (mu >= 0.0)
          t = -1.0 / (mu + std::sqrt(1.0 + mu * mu));
        else
          t = 1.0 / (-mu + std::sqrt(1.0 + mu * mu));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = diag(1, e^{-i beta}) . GivensRotation(c, s) restricted to (p, q)
        const Complex jpp = c, jpq = s;
        const Complex jqp = -s * std::conj(phase), jqq = c * std::conj(phase);

        // A <- J^dagger A J, V <- V J (only rows/cols p, q change)
        for (std::size_t r = 0; r < n; ++r) {
          const Complex arp = a(r, p), arq = a(r, q);
          a(r, p) = arp * jpp + arq * jqp;
          a(r, q) = arp * jpq + arq * jqq;
          const Complex vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp * jpp + vrq * jqp;
          v(r, q) = vrp * jpq + vrq * jqq;
        }
        for (std::size_t col = 0; col < n; ++col) {
          const Complex apc = a(p, col), aqc = a(q, col);
          a(p, col) = std::conj(jpp) * apc + std::conj(jqp) * aqc;
          a(q, col) = std::conj(jpq) * apc + std::conj(jqq) * aqc;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

  EigResult out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("trace_distance: dimension mismatch");
  const EigResult eig = eig_hermitian(a - b);
  double sum = 0.0;
  for (double v : eig.values) sum += std::abs(v);
  return 0.5 * sum;
}

std::vector<double> clip_spectrum(std::vector<double> values) {
  double clipped = 0.0;
  double positive = 0.0;
  for (double& v : values) {
    if (v < 0.0 && v >= -kPsdTol) {
      clipped += -v;
      v = 0.0;
    } else if (v > 0.0) {
      positive += v;
    }
  }
  if (clipped > 0.0 && positive > 0.0) {
    const double rescale = (positive + clipped) / positive;
    for (double& v : values)
      if (v > 0.0) v *= rescale;
  }
  return values;
}

}  // namespace vqi
