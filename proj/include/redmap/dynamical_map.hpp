#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "redmap/quantum_state.hpp"
#include "redmap/tensor_core.hpp"
#include "redmap/unitary_factory.hpp"

namespace redmap {

inline constexpr double kDefaultCondLimit = 1e12;
inline constexpr double kCpTol = 1e-8;
inline constexpr double kMapTol = 1e-9;

/// Map acting on row-major vectorized density matrices: vec(rho') = A vec(rho).
class AMatrix {
 public:
  /// Throws DimensionMismatch unless m is d_s^2 x d_s^2.
  AMatrix(ComplexMatrix m, std::size_t d_s);
  static AMatrix identity(std::size_t d_s);

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t d_s() const { return d_s_; }

  /// The output density operator for rho.
  ComplexMatrix apply(const ComplexMatrix& rho) const;

 private:
  ComplexMatrix matrix_;
  std::size_t d_s_;
};

/// Reshuffled A; trace d_s for trace-preserving maps.
class ChoiMatrix {
 public:
  ChoiMatrix(ComplexMatrix m, std::size_t d_s);
  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t d_s() const { return d_s_; }

 private:
  ComplexMatrix matrix_;
  std::size_t d_s_;
};

class KrausSet {
 public:
  /// Throws IncompleteKraus unless sum K^dagger K = I within tol.
  explicit KrausSet(std::vector<ComplexMatrix> operators, double tol = kMapTol);
  const std::vector<ComplexMatrix>& operators() const { return operators_; }
  std::size_t d_s() const { return operators_.front().rows(); }

 private:
  std::vector<ComplexMatrix> operators_;
};

enum class Verdict { CP, NCP, SINGULAR };
std::string_view to_string(Verdict v);

struct CpResult {
  Verdict verdict;
  double min_eigenvalue;
  Spectrum spectrum;
};

/// K_mu = <mu|_E u |chi>_E with the environment stored in `env_slot`.
KrausSet kraus_from_dilation(const ComplexMatrix& u, std::span<const cplx> chi_env, Slot env_slot);
KrausSet kraus_from_dilation(const ComplexMatrix& u, std::span<const cplx> chi_env, const GateConvention& conv);

AMatrix a_from_kraus(const KrausSet& k);
ChoiMatrix choi_from_a(const AMatrix& a);
AMatrix a_from_choi(const ChoiMatrix& b);

/// CP iff the smallest eigenvalue is >= -tol * max(1, ||b||_2). Throws NotHermitian past 1e-9.
CpResult cp_check(const ChoiMatrix& b, double tol = kCpTol);
bool tp_check(const AMatrix& a, double tol = kMapTol);
bool herm_check(const AMatrix& a, double tol = kMapTol);

/// Throws SingularMap when the condition number exceeds cond_limit.
AMatrix invert_a(const AMatrix& a, double cond_limit = kDefaultCondLimit);

/// a_total * a_first^-1.
AMatrix intermediate_a(const AMatrix& a_total, const AMatrix& a_first, double cond_limit = kDefaultCondLimit);

struct FamilyFit {
  AMatrix a;
  std::size_t rank;
  std::size_t unknowns;
  double residual;  // || A vec(rho_in) - vec(rho_out) || over the family
  bool unique;
};

/// Minimum-norm least-squares A over (rho_in, rho_out) pairs. With enforce_tp
/// the trace-preservation equations are appended with a large weight.
FamilyFit infer_a_from_family(std::span<const std::pair<ComplexMatrix, ComplexMatrix>> pairs, bool enforce_tp,
                              double rank_tol = 1e-10);

/// Map induced on the system by u acting on the product state `pre_product`.
AMatrix map_from_dilation(const ComplexMatrix& u, const JointPureState& pre_product);

/// Map induced by applying u_applied to phi, where phi = u_dilation * (product):
/// A(u_applied u_dilation, chi) A(u_dilation, chi)^-1 with chi the environment factor.
/// Throws NotPreInitialProduct if u_dilation^dagger phi is entangled.
AMatrix intermediate_map_on_state(const JointPureState& phi, const ComplexMatrix& u_dilation,
                                  const ComplexMatrix& u_applied, double cond_limit = kDefaultCondLimit);

}  // namespace redmap
