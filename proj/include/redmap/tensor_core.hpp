#pragma once

// Dense complex linear algebra for the small (d <= 64) operators that appear in
// two-body reduced dynamics. Everything here is a pure function of its inputs.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace redmap {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Tensor slot of a bipartite space, in storage order.
enum class Slot { first, second };

inline Slot other(Slot s) { return s == Slot::first ? Slot::second : Slot::first; }

/// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Throws DimensionMismatch if entries.size() != rows * cols, InvalidState on NaN/Inf.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  static ComplexMatrix column(std::span<const cplx> v);
  /// |a><b|
  static ComplexMatrix outer(std::span<const cplx> a, std::span<const cplx> b);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> entries() const { return data_; }
  std::span<cplx> entries() { return data_; }
  CVector column_vector(std::size_t c) const;
  void set_column(std::size_t c, std::span<const cplx> v);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
CVector operator*(const ComplexMatrix& a, std::span<const cplx> v);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double norm2(std::span<const cplx> v);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);  // <a|b>

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
struct Spectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;  // columns
};

struct SvdResult {
  ComplexMatrix u;                     // rows x k, orthonormal columns
  std::vector<double> singular_values; // k = min(rows, cols), descending
  ComplexMatrix v;                     // cols x k, orthonormal columns
};

struct LstsqResult {
  ComplexMatrix solution;
  std::size_t rank = 0;
  double residual = 0.0;
};

/// Eigen-decomposition of a normal matrix (here: unitaries).
struct NormalSpectrum {
  CVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Relative Hermiticity acceptance used by eigh and unitary_exp.
inline constexpr double kHermitianTol = 1e-10;

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced operator on the kept slot of a (d_first*d_second)-dimensional square matrix.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d_first, std::size_t d_second, Slot keep);

/// out[(i,k),(j,l)] = in[(i,j),(k,l)] with the first index of each pair ranging
/// over d1 and the second over d2. Singular values of the result give the
/// operator-Schmidt coefficients of `m` across the d1|d2 cut.
ComplexMatrix realign(const ComplexMatrix& m, std::size_t d1, std::size_t d2);

/// A-matrix <-> Choi reshuffle on a d^2 x d^2 matrix; an involution.
ComplexMatrix reshuffle(const ComplexMatrix& m, std::size_t d);

/// Swap the two tensor factors of a (d_first*d_second)-square operator.
ComplexMatrix swap_tensor_factors(const ComplexMatrix& m, std::size_t d_first, std::size_t d_second);

/// ||m - m^dagger||_F / max(1, ||m||_F).
double hermiticity_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
/// ||u^dagger u - I||_F
double unitarity_defect(const ComplexMatrix& u);
bool is_unitary(const ComplexMatrix& u, double tol = 1e-9);

/// Cyclic Jacobi. Throws NotHermitian if the relative asymmetry exceeds kHermitianTol.
Spectrum eigh(const ComplexMatrix& h);

/// One-sided (Hestenes) Jacobi SVD: Jacobi rotations that diagonalize the Gram
/// matrix implicitly while keeping the columns mutually orthogonal.
SvdResult svd(const ComplexMatrix& m);

/// 2-norm condition number; infinity for exactly singular input.
double condition_number(const ComplexMatrix& m);

/// Gauss-Jordan inverse with partial pivoting. Throws DimensionMismatch for non-square input.
ComplexMatrix inverse(const ComplexMatrix& m);

/// e^{-i h t} through the spectral decomposition of Hermitian h.
ComplexMatrix unitary_exp(const ComplexMatrix& h, double t);

/// Eigenvalues and an orthonormal eigenbasis of a unitary. Degenerate phase
/// clusters (tolerance 1e-8) are re-orthonormalized.
NormalSpectrum unitary_eig(const ComplexMatrix& u);

/// Principal-branch eigenphase in (-pi, pi]; an eigenvalue numerically at -1 maps to +pi.
double principal_phase(cplx z);

/// Hermitian H with e^{-iH} = u; eigenphases of u taken in (-pi, pi].
ComplexMatrix logm_unitary(const ComplexMatrix& u);

/// Minimum-norm least squares coeff * x = rhs; singular values below
/// rank_tol * sigma_max are dropped.
LstsqResult lstsq_minnorm(const ComplexMatrix& coeff, const ComplexMatrix& rhs, double rank_tol);

}  // namespace redmap
