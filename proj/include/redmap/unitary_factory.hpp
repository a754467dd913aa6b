#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "redmap/quantum_state.hpp"
#include "redmap/tensor_core.hpp"

namespace redmap {

enum class RootBranch { principal, alternate };

/// Reading of written two-factor expressions (|x>|y>, A (x) B): SE puts the
/// system first, ES puts the environment first.
enum class TensorOrder { SE, ES };

/// How the two-qubit gate formulas |0><0| (x) 1 + |1><1| (x) U are laid out.
/// Every field must be given; there is no default convention.
struct GateConvention {
  GateConvention(Slot control, RootBranch branch, TensorOrder order)
      : control_slot(control), root_branch(branch), tensor_order(order) {}

  Slot control_slot;
  RootBranch root_branch;
  TensorOrder tensor_order;

  /// Storage slot of the system under this convention.
  Slot system_slot() const { return tensor_order == TensorOrder::SE ? Slot::first : Slot::second; }
  Slot env_slot() const { return other(system_slot()); }

  friend bool operator==(const GateConvention&, const GateConvention&) = default;
};

std::string to_string(const GateConvention& conv);
std::string_view to_string(Slot s);
std::string_view to_string(RootBranch b);
std::string_view to_string(TensorOrder o);

/// "x", "y" or "z" (case-insensitive). Throws UnknownGate otherwise.
ComplexMatrix pauli(std::string_view name);

/// |0><0| (x) 1 + |1><1| (x) u with the control on `control_slot`; u may be d x d.
ComplexMatrix controlled(const ComplexMatrix& u, Slot control_slot);
ComplexMatrix controlled(const ComplexMatrix& u, const GateConvention& conv);

/// Spectral n-th root. The principal branch divides eigenphases in (-pi, pi];
/// the alternate branch first sends an eigenphase of +pi to -pi.
ComplexMatrix unitary_root(const ComplexMatrix& u, int n, RootBranch branch);

/// Haar-distributed d x d unitary for sample `index` under `seed`.
ComplexMatrix haar_unitary(std::size_t d, std::uint64_t seed, std::uint64_t index = 0);

/// Haar-random unit vector of length d.
CVector haar_ket(std::size_t d, std::uint64_t seed, std::uint64_t index = 0);

/// Operator-Schmidt coefficients of u across the d_first | d_second cut (descending).
std::vector<double> operator_schmidt_coefficients(const ComplexMatrix& u, std::size_t d_first, std::size_t d_second);

/// True iff the second operator-Schmidt coefficient is below tol times the first.
bool is_local_unitary(const ComplexMatrix& u, std::size_t d_first, std::size_t d_second, double tol = 1e-9);

struct Dilation {
  ComplexMatrix unitary;
  JointPureState pre_product;  // unitary * pre_product == phi
};

/// Unitary carrying the first computational product state onto phi; built by
/// completing phi to an orthonormal basis with modified Gram-Schmidt.
Dilation dilation_from_state(const JointPureState& phi);

/// Named gate in storage order: CNOT, SQRT_CNOT, CPHASE, SQRT_CPHASE (two-qubit,
/// controlled per conv) or X, Y, Z (single qubit). Throws UnknownGate.
ComplexMatrix named_gate(std::string_view name, const GateConvention& conv);

/// Two-qubit local operator with `on_control` acting on the control qubit of
/// conv and `on_target` on the other, in storage order.
ComplexMatrix local_operator(const ComplexMatrix& on_control, const ComplexMatrix& on_target,
                             const GateConvention& conv);

}  // namespace redmap
