#include "redmap/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "redmap/errors.hpp"

namespace redmap {

namespace {

std::string dims(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.square() || m.empty()) {
    throw DimensionMismatch(std::string(what) + ": expected a non-empty square matrix, got " + dims(m));
  }
}

// 2x2 unitary G with G^dagger [[a, b], [conj(b), d]] G diagonal (a, d real).
struct JacobiRotation {
  cplx pp, pq, qp, qq;
};

JacobiRotation jacobi_rotation(double a, double d, cplx b) {
  const double ab = std::abs(b);
  const double tau = (d - a) / (2.0 * ab);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const cplx ph = std::conj(b / ab);
  return {c, s, -s * ph, c * ph};
}

// Columns p, q of m are replaced by [m_p m_q] * G.
void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, const JacobiRotation& g) {
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const cplx mp = m(k, p);
    const cplx mq = m(k, q);
    m(k, p) = mp * g.pp + mq * g.qp;
    m(k, q) = mp * g.pq + mq * g.qq;
  }
}

void rotate_rows_adjoint(ComplexMatrix& m, std::size_t p, std::size_t q, const JacobiRotation& g) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const cplx mp = m(p, k);
    const cplx mq = m(q, k);
    m(p, k) = std::conj(g.pp) * mp + std::conj(g.qp) * mq;
    m(q, k) = std::conj(g.pq) * mp + std::conj(g.qq) * mq;
  }
}

double column_norm2(const ComplexMatrix& m, std::size_t c) {
  double s = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) s += std::norm(m(r, c));
  return s;
}

cplx column_inner(const ComplexMatrix& m, std::size_t a, std::size_t b) {
  cplx s = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) s += std::conj(m(r, a)) * m(r, b);
  return s;
}

// Orthonormalize column c of q against columns in `against` (twice), in place.
// Returns the norm left before normalization.
double orthonormalize_column(ComplexMatrix& q, std::size_t c, std::span<const std::size_t> against) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j : against) {
      const cplx proj = column_inner(q, j, c);
      for (std::size_t r = 0; r < q.rows(); ++r) q(r, c) -= proj * q(r, j);
    }
  }
  const double nrm = std::sqrt(column_norm2(q, c));
  if (nrm > 0.0) {
    for (std::size_t r = 0; r < q.rows(); ++r) q(r, c) /= nrm;
  }
  return nrm;
}

// Fill column c with a unit vector orthogonal to `against`, trying standard basis vectors.
void complete_column(ComplexMatrix& q, std::size_t c, std::span<const std::size_t> against) {
  double best = -1.0;
  std::size_t best_e = 0;
  for (std::size_t e = 0; e < q.rows(); ++e) {
    double residual = 1.0;
    for (std::size_t j : against) residual -= std::norm(q(e, j));
    if (residual > best) {
      best = residual;
      best_e = e;
    }
  }
  for (std::size_t r = 0; r < q.rows(); ++r) q(r, c) = (r == best_e) ? 1.0 : 0.0;
  orthonormalize_column(q, c, against);
}

ComplexMatrix hermitian_combination(const ComplexMatrix& u, double angle) {
  // cos(angle) * (u + u^dag)/2 + sin(angle) * (u - u^dag)/(2i)
  const ComplexMatrix ud = u.adjoint();
  const cplx a = 0.5 * std::cos(angle);
  const cplx b = cplx(0.0, -0.5) * std::sin(angle);
  ComplexMatrix k = (u + ud) * a + (u - ud) * b;
  return (k + k.adjoint()) * 0.5;
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionMismatch("ComplexMatrix: " + std::to_string(data_.size()) + " entries for " +
                            std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!all_finite()) throw InvalidState("ComplexMatrix: non-finite entry");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionMismatch("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> v) {
  return ComplexMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> a, std::span<const cplx> b) {
  ComplexMatrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  return m;
}

CVector ComplexMatrix::column_vector(std::size_t c) const {
  CVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const cplx> v) {
  if (v.size() != rows_) throw DimensionMismatch("set_column: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix m = *this;
  for (auto& x : m.data_) x = std::conj(x);
  return m;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double s = 0.0;
  for (const auto& x : data_) s = std::max(s, std::abs(x));
  return s;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix +: " + dims(*this) + " vs " + dims(o));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix -: " + dims(*this) + " vs " + dims(o));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix *: " + dims(a) + " vs " + dims(b));
  ComplexMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

CVector operator*(const ComplexMatrix& a, std::span<const cplx> v) {
  if (a.cols() != v.size()) throw DimensionMismatch("matrix-vector *: " + dims(a) + " vs " + std::to_string(v.size()));
  CVector out(a.rows(), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * v[k];
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("max_abs_diff: " + dims(a) + " vs " + dims(b));
  }
  return (a - b).max_abs();
}

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DimensionMismatch("inner: length mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// Tensor structure

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return m;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d_first, std::size_t d_second, Slot keep) {
  const std::size_t n = d_first * d_second;
  if (m.rows() != n || m.cols() != n) {
    throw DimensionMismatch("partial_trace: " + dims(m) + " is not " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (keep == Slot::first) {
    ComplexMatrix out(d_first, d_first);
    for (std::size_t i = 0; i < d_first; ++i)
      for (std::size_t j = 0; j < d_first; ++j)
        for (std::size_t k = 0; k < d_second; ++k) out(i, j) += m(i * d_second + k, j * d_second + k);
    return out;
  }
  ComplexMatrix out(d_second, d_second);
  for (std::size_t i = 0; i < d_second; ++i)
    for (std::size_t j = 0; j < d_second; ++j)
      for (std::size_t k = 0; k < d_first; ++k) out(i, j) += m(k * d_second + i, k * d_second + j);
  return out;
}

ComplexMatrix realign(const ComplexMatrix& m, std::size_t d1, std::size_t d2) {
  const std::size_t n = d1 * d2;
  if (m.rows() != n || m.cols() != n) {
    throw DimensionMismatch("realign: " + dims(m) + " is not " + std::to_string(n) + "x" + std::to_string(n));
  }
  ComplexMatrix out(d1 * d1, d2 * d2);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d2; ++j)
      for (std::size_t k = 0; k < d1; ++k)
        for (std::size_t l = 0; l < d2; ++l) out(i * d1 + k, j * d2 + l) = m(i * d2 + j, k * d2 + l);
  return out;
}

ComplexMatrix reshuffle(const ComplexMatrix& m, std::size_t d) {
  if (d == 0 || m.rows() != d * d || m.cols() != d * d) {
    throw DimensionMismatch("reshuffle: " + dims(m) + " is not d^2 x d^2 for d=" + std::to_string(d));
  }
  return realign(m, d, d);
}

ComplexMatrix swap_tensor_factors(const ComplexMatrix& m, std::size_t d_first, std::size_t d_second) {
  const std::size_t n = d_first * d_second;
  if (m.rows() != n || m.cols() != n) throw DimensionMismatch("swap_tensor_factors: " + dims(m));
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < d_first; ++i)
    for (std::size_t j = 0; j < d_second; ++j)
      for (std::size_t k = 0; k < d_first; ++k)
        for (std::size_t l = 0; l < d_second; ++l) out(j * d_first + i, l * d_first + k) = m(i * d_second + j, k * d_second + l);
  return out;
}

// ---------------------------------------------------------------------------
// Structure checks

double hermiticity_defect(const ComplexMatrix& m) {
  require_square(m, "hermiticity_defect");
  return (m - m.adjoint()).frobenius_norm() / std::max(1.0, m.frobenius_norm());
}

bool is_hermitian(const ComplexMatrix& m, double tol) { return hermiticity_defect(m) <= tol; }

double unitarity_defect(const ComplexMatrix& u) {
  require_square(u, "unitarity_defect");
  return (u.adjoint() * u - ComplexMatrix::identity(u.rows())).frobenius_norm();
}

bool is_unitary(const ComplexMatrix& u, double tol) { return u.square() && !u.empty() && unitarity_defect(u) <= tol; }

// ---------------------------------------------------------------------------
// Spectral routines

Spectrum eigh(const ComplexMatrix& h) {
  require_square(h, "eigh");
  if (!h.all_finite()) throw InvalidState("eigh: non-finite entry");
  if (hermiticity_defect(h) > kHermitianTol) {
    throw NotHermitian("eigh: relative asymmetry " + std::to_string(hermiticity_defect(h)));
  }
  const std::size_t n = h.rows();
  ComplexMatrix a = (h + h.adjoint()) * 0.5;
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = 1e-13 * a.frobenius_norm();

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * std::norm(a(p, q));
    if (std::sqrt(off) <= threshold) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx b = a(p, q);
        if (std::abs(b) < std::numeric_limits<double>::min()) continue;
        const auto g = jacobi_rotation(a(p, p).real(), a(q, q).real(), b);
        rotate_columns(a, p, q, g);
        rotate_rows_adjoint(a, p, q, g);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, g);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    s.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) s.eigenvectors(r, k) = v(r, order[k]);
  }
  return s;
}

SvdResult svd(const ComplexMatrix& m) {
  if (m.empty()) throw DimensionMismatch("svd: empty matrix");
  if (m.rows() < m.cols()) {
    SvdResult t = svd(m.adjoint());
    return {std::move(t.v), std::move(t.singular_values), std::move(t.u)};
  }
  const std::size_t n = m.cols();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(n);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = column_norm2(a, p);
        const double beta = column_norm2(a, q);
        const cplx gamma = column_inner(a, p, q);
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || std::abs(gamma) < std::numeric_limits<double>::min()) {
          continue;
        }
        rotated = true;
        const auto g = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(a, p, q, g);
        rotate_columns(v, p, q, g);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(column_norm2(a, j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult r;
  r.u = ComplexMatrix(m.rows(), n);
  r.v = ComplexMatrix(n, n);
  r.singular_values.resize(n);
  const double smax = sigma[order[0]];
  std::vector<std::size_t> done;
  std::vector<std::size_t> deficient;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    r.singular_values[k] = sigma[j];
    for (std::size_t row = 0; row < n; ++row) r.v(row, k) = v(row, j);
    if (sigma[j] > std::numeric_limits<double>::min() && sigma[j] > 1e-300 * smax) {
      for (std::size_t row = 0; row < m.rows(); ++row) r.u(row, k) = a(row, j) / sigma[j];
      done.push_back(k);
    } else {
      deficient.push_back(k);
    }
  }
  for (std::size_t k : deficient) {
    complete_column(r.u, k, done);
    done.push_back(k);
  }
  return r;
}

double condition_number(const ComplexMatrix& m) {
  require_square(m, "condition_number");
  const auto s = svd(m);
  const double smin = s.singular_values.back();
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s.singular_values.front() / smin;
}

ComplexMatrix inverse(const ComplexMatrix& m) {
  require_square(m, "inverse");
  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  ComplexMatrix inv = ComplexMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) == 0.0) throw SingularMap("inverse: exactly singular matrix");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    }
    const cplx d = a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const cplx f = a(r, col);
      if (f == cplx(0.0, 0.0)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

ComplexMatrix unitary_exp(const ComplexMatrix& h, double t) {
  const Spectrum s = eigh(h);
  CVector phases(s.eigenvalues.size());
  for (std::size_t k = 0; k < phases.size(); ++k) phases[k] = std::exp(cplx(0.0, -s.eigenvalues[k] * t));
  return s.eigenvectors * ComplexMatrix::diagonal(phases) * s.eigenvectors.adjoint();
}

double principal_phase(cplx z) {
  const double phi = std::arg(z);
  if (phi <= -std::numbers::pi + 1e-9) return std::numbers::pi;
  return phi;
}

NormalSpectrum unitary_eig(const ComplexMatrix& u) {
  require_square(u, "unitary_eig");
  if (!is_unitary(u)) throw NotUnitary("unitary_eig: defect " + std::to_string(unitarity_defect(u)));
  const std::size_t n = u.rows();

  // Any real combination of the commuting Hermitian and anti-Hermitian parts
  // shares the eigenbasis of u; a second combination splits coincidences.
  const Spectrum first = eigh(hermitian_combination(u, 0.5));
  ComplexMatrix vecs = first.eigenvectors;
  constexpr double split_tol = 1e-6;
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && first.eigenvalues[end] - first.eigenvalues[end - 1] < split_tol) ++end;
    if (end - begin > 1) {
      const std::size_t m = end - begin;
      ComplexMatrix p(n, m);
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t r = 0; r < n; ++r) p(r, c) = vecs(r, begin + c);
      ComplexMatrix projected = p.adjoint() * hermitian_combination(u, 1.3) * p;
      projected = (projected + projected.adjoint()) * 0.5;
      const ComplexMatrix rotated = p * eigh(projected).eigenvectors;
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t r = 0; r < n; ++r) vecs(r, begin + c) = rotated(r, c);
    }
    begin = end;
  }

  NormalSpectrum out;
  out.eigenvalues.resize(n);
  const ComplexMatrix uv = u * vecs;
  for (std::size_t k = 0; k < n; ++k) {
    cplx rq = 0.0;
    for (std::size_t r = 0; r < n; ++r) rq += std::conj(vecs(r, k)) * uv(r, k);
    out.eigenvalues[k] = rq / std::abs(rq);
  }

  // Re-orthonormalize inside clusters of (numerically) equal eigenphase.
  constexpr double cluster_tol = 1e-8;
  std::vector<bool> assigned(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    if (assigned[k]) continue;
    std::vector<std::size_t> cluster{k};
    assigned[k] = true;
    for (std::size_t j = k + 1; j < n; ++j) {
      if (!assigned[j] && std::abs(out.eigenvalues[j] - out.eigenvalues[k]) < cluster_tol) {
        cluster.push_back(j);
        assigned[j] = true;
      }
    }
    std::vector<std::size_t> prior;
    for (std::size_t c : cluster) {
      orthonormalize_column(vecs, c, prior);
      prior.push_back(c);
    }
  }
  out.eigenvectors = std::move(vecs);
  return out;
}

ComplexMatrix logm_unitary(const ComplexMatrix& u) {
  const NormalSpectrum s = unitary_eig(u);
  CVector phases(s.eigenvalues.size());
  for (std::size_t k = 0; k < phases.size(); ++k) phases[k] = -principal_phase(s.eigenvalues[k]);
  ComplexMatrix h = s.eigenvectors * ComplexMatrix::diagonal(phases) * s.eigenvectors.adjoint();
  return (h + h.adjoint()) * 0.5;
}

LstsqResult lstsq_minnorm(const ComplexMatrix& coeff, const ComplexMatrix& rhs, double rank_tol) {
  if (coeff.rows() != rhs.rows()) {
    throw DimensionMismatch("lstsq_minnorm: coefficient " + dims(coeff) + " vs rhs " + dims(rhs));
  }
  const SvdResult s = svd(coeff);
  const double smax = s.singular_values.empty() ? 0.0 : s.singular_values.front();
  LstsqResult r;
  r.solution = ComplexMatrix(coeff.cols(), rhs.cols());
  const ComplexMatrix utb = s.u.adjoint() * rhs;
  for (std::size_t k = 0; k < s.singular_values.size(); ++k) {
    const double sk = s.singular_values[k];
    if (smax == 0.0 || sk <= rank_tol * smax) continue;
    ++r.rank;
    for (std::size_t c = 0; c < rhs.cols(); ++c) {
      const cplx w = utb(k, c) / sk;
      for (std::size_t row = 0; row < coeff.cols(); ++row) r.solution(row, c) += s.v(row, k) * w;
    }
  }
  r.residual = (coeff * r.solution - rhs).frobenius_norm();
  return r;
}

}  // namespace redmap
