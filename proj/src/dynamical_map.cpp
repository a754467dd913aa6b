#include "redmap/dynamical_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "redmap/errors.hpp"

namespace redmap {

namespace {

void require_map_shape(const ComplexMatrix& m, std::size_t d_s, const char* what) {
  if (d_s == 0 || m.rows() != d_s * d_s || m.cols() != d_s * d_s) {
    throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(d_s * d_s) + "x" +
                            std::to_string(d_s * d_s) + ", got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
}

CVector vec(const ComplexMatrix& rho) { return CVector(rho.entries().begin(), rho.entries().end()); }

}  // namespace

AMatrix::AMatrix(ComplexMatrix m, std::size_t d_s) : matrix_(std::move(m)), d_s_(d_s) {
  require_map_shape(matrix_, d_s_, "AMatrix");
}

AMatrix AMatrix::identity(std::size_t d_s) { return AMatrix(ComplexMatrix::identity(d_s * d_s), d_s); }

ComplexMatrix AMatrix::apply(const ComplexMatrix& rho) const {
  if (rho.rows() != d_s_ || rho.cols() != d_s_) throw DimensionMismatch("AMatrix::apply: wrong input size");
  return ComplexMatrix(d_s_, d_s_, matrix_ * rho.entries());
}

ChoiMatrix::ChoiMatrix(ComplexMatrix m, std::size_t d_s) : matrix_(std::move(m)), d_s_(d_s) {
  require_map_shape(matrix_, d_s_, "ChoiMatrix");
}

KrausSet::KrausSet(std::vector<ComplexMatrix> operators, double tol) : operators_(std::move(operators)) {
  if (operators_.empty()) throw IncompleteKraus("KrausSet: no operators");
  const std::size_t d = operators_.front().rows();
  ComplexMatrix sum(d, d);
  for (const auto& k : operators_) {
    if (k.rows() != d || k.cols() != d) throw DimensionMismatch("KrausSet: operators differ in shape");
    sum += k.adjoint() * k;
  }
  const double defect = (sum - ComplexMatrix::identity(d)).frobenius_norm();
  if (defect > tol) throw IncompleteKraus("KrausSet: completeness defect " + std::to_string(defect));
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::CP: return "CP";
    case Verdict::NCP: return "NCP";
    case Verdict::SINGULAR: return "SINGULAR";
  }
  return "?";
}

KrausSet kraus_from_dilation(const ComplexMatrix& u, std::span<const cplx> chi_env, Slot env_slot) {
  if (!is_unitary(u)) throw NotUnitary("kraus_from_dilation: joint operator is not unitary");
  const std::size_t de = chi_env.size();
  if (de == 0 || u.rows() % de != 0) {
    throw DimensionMismatch("kraus_from_dilation: environment dimension " + std::to_string(de) +
                            " does not divide " + std::to_string(u.rows()));
  }
  if (std::abs(norm2(chi_env) - 1.0) > 1e-10) throw InvalidState("kraus_from_dilation: environment state not normalized");
  const std::size_t ds = u.rows() / de;
  auto idx = [&](std::size_t s, std::size_t e) { return env_slot == Slot::second ? s * de + e : e * ds + s; };

  std::vector<ComplexMatrix> ks;
  ks.reserve(de);
  for (std::size_t mu = 0; mu < de; ++mu) {
    ComplexMatrix k(ds, ds);
    for (std::size_t i = 0; i < ds; ++i)
      for (std::size_t j = 0; j < ds; ++j) {
        cplx acc = 0.0;
        for (std::size_t nu = 0; nu < de; ++nu) acc += u(idx(i, mu), idx(j, nu)) * chi_env[nu];
        k(i, j) = acc;
      }
    ks.push_back(std::move(k));
  }
  return KrausSet(std::move(ks));
}

KrausSet kraus_from_dilation(const ComplexMatrix& u, std::span<const cplx> chi_env, const GateConvention& conv) {
  return kraus_from_dilation(u, chi_env, conv.env_slot());
}

AMatrix a_from_kraus(const KrausSet& k) {
  const std::size_t d = k.d_s();
  ComplexMatrix a(d * d, d * d);
  for (const auto& op : k.operators()) a += kron(op, op.conj());
  return AMatrix(std::move(a), d);
}

ChoiMatrix choi_from_a(const AMatrix& a) { return ChoiMatrix(reshuffle(a.matrix(), a.d_s()), a.d_s()); }

AMatrix a_from_choi(const ChoiMatrix& b) { return AMatrix(reshuffle(b.matrix(), b.d_s()), b.d_s()); }

CpResult cp_check(const ChoiMatrix& b, double tol) {
  const double defect = hermiticity_defect(b.matrix());
  if (defect > 1e-9) throw NotHermitian("cp_check: Choi matrix asymmetry " + std::to_string(defect));
  Spectrum s = eigh((b.matrix() + b.matrix().adjoint()) * 0.5);
  const double lo = s.eigenvalues.front();
  const double norm = std::max(std::abs(lo), std::abs(s.eigenvalues.back()));
  const Verdict v = lo >= -tol * std::max(1.0, norm) ? Verdict::CP : Verdict::NCP;
  return {v, lo, std::move(s)};
}

bool tp_check(const AMatrix& a, double tol) {
  const std::size_t d = a.d_s();
  const auto& m = a.matrix();
  double worst = 0.0;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < d; ++i) acc += m(i * d + i, k * d + l);
      worst = std::max(worst, std::abs(acc - cplx(k == l ? 1.0 : 0.0, 0.0)));
    }
  return worst <= tol;
}

bool herm_check(const AMatrix& a, double tol) {
  // Hermiticity preservation: A[(i,j),(k,l)] = conj(A[(j,i),(l,k)]).
  const std::size_t d = a.d_s();
  const auto& m = a.matrix();
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          worst = std::max(worst, std::abs(m(i * d + j, k * d + l) - std::conj(m(j * d + i, l * d + k))));
  return worst <= tol * std::max(1.0, m.max_abs());
}

AMatrix invert_a(const AMatrix& a, double cond_limit) {
  const double cond = condition_number(a.matrix());
  if (!(cond <= cond_limit)) {
    throw SingularMap("invert_a: condition number " + std::to_string(cond) + " exceeds " + std::to_string(cond_limit) +
                      "; the first-leg map is not invertible (maximally entangled initial correlations)");
  }
  return AMatrix(inverse(a.matrix()), a.d_s());
}

AMatrix intermediate_a(const AMatrix& a_total, const AMatrix& a_first, double cond_limit) {
  if (a_total.d_s() != a_first.d_s()) throw DimensionMismatch("intermediate_a: maps act on different systems");
  return AMatrix(a_total.matrix() * invert_a(a_first, cond_limit).matrix(), a_total.d_s());
}

FamilyFit infer_a_from_family(std::span<const std::pair<ComplexMatrix, ComplexMatrix>> pairs, bool enforce_tp,
                              double rank_tol) {
  if (pairs.empty()) throw InvalidState("infer_a_from_family: empty family");
  const std::size_t d = pairs.front().first.rows();
  const std::size_t n = d * d;
  for (const auto& [in, out] : pairs) {
    static_cast<void>(DensityMatrix(in));
    static_cast<void>(DensityMatrix(out));
    if (in.rows() != d || out.rows() != d) throw DimensionMismatch("infer_a_from_family: mixed dimensions");
  }

  // Unknown x = row-major vec(A); each pair contributes n equations.
  const std::size_t data_rows = pairs.size() * n;
  const std::size_t rows = data_rows + (enforce_tp ? n : 0);
  ComplexMatrix coeff(rows, n * n);
  ComplexMatrix rhs(rows, 1);
  double scale = 1.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const CVector vin = vec(pairs[p].first);
    const CVector vout = vec(pairs[p].second);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        coeff(p * n + r, r * n + c) = vin[c];
        scale = std::max(scale, std::abs(vin[c]));
      }
      rhs(p * n + r, 0) = vout[r];
    }
  }
  if (enforce_tp) {
    const double w = 1e3 * scale;
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t i = 0; i < d; ++i) coeff(data_rows + c, (i * d + i) * n + c) = w;
      rhs(data_rows + c, 0) = (c / d == c % d) ? w : 0.0;
    }
  }

  const LstsqResult sol = lstsq_minnorm(coeff, rhs, rank_tol);
  AMatrix a(ComplexMatrix(n, n, CVector(sol.solution.entries().begin(), sol.solution.entries().end())), d);
  double res2 = 0.0;
  for (const auto& [in, out] : pairs) {
    const double r = (a.apply(in) - out).frobenius_norm();
    res2 += r * r;
  }
  return {std::move(a), sol.rank, n * n, std::sqrt(res2), sol.rank == n * n};
}

AMatrix map_from_dilation(const ComplexMatrix& u, const JointPureState& pre_product) {
  const auto f = product_factors(pre_product);
  if (!f) throw NotPreInitialProduct("map_from_dilation: initial state is entangled");
  CVector chi = pre_product.env_slot() == Slot::first ? f->first : f->second;
  const double n = norm2(chi);
  for (auto& x : chi) x /= n;
  return a_from_kraus(kraus_from_dilation(u, chi, pre_product.env_slot()));
}

AMatrix intermediate_map_on_state(const JointPureState& phi, const ComplexMatrix& u_dilation,
                                  const ComplexMatrix& u_applied, double cond_limit) {
  if (u_dilation.rows() != phi.dim() || u_applied.rows() != phi.dim()) {
    throw DimensionMismatch("intermediate_map_on_state: operator and state dimensions differ");
  }
  const JointPureState pre = phi.evolved(u_dilation.adjoint());
  if (!is_product(pre)) {
    throw NotPreInitialProduct("intermediate_map_on_state: dilation does not map a product state onto phi");
  }
  const AMatrix first = map_from_dilation(u_dilation, pre);
  const AMatrix total = map_from_dilation(u_applied * u_dilation, pre);
  return intermediate_a(total, first, cond_limit);
}

}  // namespace redmap
