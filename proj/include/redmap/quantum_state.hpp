#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "redmap/tensor_core.hpp"

namespace redmap {

enum class EntropyBase { bits, nats };

/// Default tolerance on Schmidt coefficients for product / maximality tests.
inline constexpr double kSchmidtTol = 1e-9;

/// Normalized pure state of a bipartite space. Amplitudes are stored in
/// (first, second) order; `system_slot` names which factor is the system.
class JointPureState {
 public:
  /// Throws InvalidState unless ||amplitudes|| = 1 within 1e-12 and the length is d_first*d_second.
  JointPureState(CVector amplitudes, std::size_t d_first, std::size_t d_second, Slot system_slot);

  /// Rescales `amplitudes` to unit norm first.
  static JointPureState normalized(CVector amplitudes, std::size_t d_first, std::size_t d_second, Slot system_slot);
  static JointPureState product(std::span<const cplx> first, std::span<const cplx> second, Slot system_slot);

  const CVector& amplitudes() const { return amplitudes_; }
  std::size_t d_first() const { return d_first_; }
  std::size_t d_second() const { return d_second_; }
  std::size_t dim() const { return amplitudes_.size(); }
  Slot system_slot() const { return system_slot_; }
  Slot env_slot() const { return other(system_slot_); }
  std::size_t d_system() const { return system_slot_ == Slot::first ? d_first_ : d_second_; }
  std::size_t d_env() const { return system_slot_ == Slot::first ? d_second_ : d_first_; }

  /// d_first x d_second matrix of amplitudes.
  ComplexMatrix coefficients() const;
  ComplexMatrix projector() const;

  /// Same physical state with the tensor factors stored in the order that puts the system at `slot`.
  JointPureState with_system_slot(Slot slot) const;

  /// u * |psi>, renormalized against round-off.
  JointPureState evolved(const ComplexMatrix& u) const;

 private:
  CVector amplitudes_;
  std::size_t d_first_;
  std::size_t d_second_;
  Slot system_slot_;
};

/// Hermitian, unit-trace, positive semidefinite operator (tolerance 1e-10).
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);
  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
};

struct SchmidtDecomposition {
  std::vector<double> coefficients;  // descending, min(d_first, d_second) of them
  ComplexMatrix first_basis;         // columns
  ComplexMatrix second_basis;        // columns; psi = sum_k c_k first_k (x) second_k
};

struct ProductFactors {
  CVector first;
  CVector second;
};

SchmidtDecomposition schmidt(const JointPureState& psi);

/// Reduced density matrix on `keep`.
DensityMatrix reduced_state(const JointPureState& psi, Slot keep);

double entanglement_entropy(const JointPureState& psi, EntropyBase base = EntropyBase::bits);

/// -sum lambda log lambda. Throws InvalidState for eigenvalues below -1e-10.
double vn_entropy(const DensityMatrix& rho, EntropyBase base = EntropyBase::bits);

/// Shannon entropy of a probability vector, 0 log 0 := 0.
double shannon_entropy(std::span<const double> probabilities, EntropyBase base);

bool is_product(const JointPureState& psi, double tol = kSchmidtTol);
bool is_maximally_entangled(const JointPureState& psi, double tol = kSchmidtTol);

/// Factors of a product state (first (x) second == psi), or nullopt if the
/// second Schmidt coefficient is not below tol.
std::optional<ProductFactors> product_factors(const JointPureState& psi, double tol = kSchmidtTol);

/// min over global phase of || a - e^{i phi} b ||.
double phase_insensitive_distance(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace redmap
