#include "redmap/unitary_factory.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "redmap/errors.hpp"
#include "redmap/random.hpp"

namespace redmap {

std::string_view to_string(Slot s) { return s == Slot::first ? "first" : "second"; }
std::string_view to_string(RootBranch b) { return b == RootBranch::principal ? "principal" : "alternate"; }
std::string_view to_string(TensorOrder o) { return o == TensorOrder::SE ? "SE" : "ES"; }

std::string to_string(const GateConvention& conv) {
  return "control=" + std::string(to_string(conv.control_slot)) + ",branch=" + std::string(to_string(conv.root_branch)) +
         ",order=" + std::string(to_string(conv.tensor_order));
}

ComplexMatrix pauli(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  const cplx i(0.0, 1.0);
  if (n == "x") return {{0.0, 1.0}, {1.0, 0.0}};
  if (n == "y") return {{0.0, -i}, {i, 0.0}};
  if (n == "z") return {{1.0, 0.0}, {0.0, -1.0}};
  throw UnknownGate("pauli: unknown name '" + std::string(name) + "'");
}

ComplexMatrix controlled(const ComplexMatrix& u, Slot control_slot) {
  if (!is_unitary(u)) throw NotUnitary("controlled: target operator is not unitary");
  const ComplexMatrix p0{{1.0, 0.0}, {0.0, 0.0}};
  const ComplexMatrix p1{{0.0, 0.0}, {0.0, 1.0}};
  const auto id = ComplexMatrix::identity(u.rows());
  if (control_slot == Slot::first) return kron(p0, id) + kron(p1, u);
  return kron(id, p0) + kron(u, p1);
}

ComplexMatrix controlled(const ComplexMatrix& u, const GateConvention& conv) {
  return controlled(u, conv.control_slot);
}

ComplexMatrix unitary_root(const ComplexMatrix& u, int n, RootBranch branch) {
  if (n < 1) throw Error("unitary_root: n must be >= 1");
  const NormalSpectrum s = unitary_eig(u);
  CVector roots(s.eigenvalues.size());
  for (std::size_t k = 0; k < roots.size(); ++k) {
    double phase = principal_phase(s.eigenvalues[k]);
    if (branch == RootBranch::alternate && phase > std::numbers::pi - 1e-9) phase = -std::numbers::pi;
    roots[k] = std::exp(cplx(0.0, phase / n));
  }
  return s.eigenvectors * ComplexMatrix::diagonal(roots) * s.eigenvectors.adjoint();
}

ComplexMatrix haar_unitary(std::size_t d, std::uint64_t seed, std::uint64_t index) {
  if (d == 0) throw DimensionMismatch("haar_unitary: d must be >= 1");
  CounterRng rng(seed, index);
  ComplexMatrix q(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) q(r, c) = rng.complex_normal();
  // Gram-Schmidt leaves R with a positive real diagonal, which is exactly the
  // phase fix that makes Q Haar distributed.
  for (std::size_t c = 0; c < d; ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < c; ++j) {
        cplx proj = 0.0;
        for (std::size_t r = 0; r < d; ++r) proj += std::conj(q(r, j)) * q(r, c);
        for (std::size_t r = 0; r < d; ++r) q(r, c) -= proj * q(r, j);
      }
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < d; ++r) nrm += std::norm(q(r, c));
    nrm = std::sqrt(nrm);
    for (std::size_t r = 0; r < d; ++r) q(r, c) /= nrm;
  }
  return q;
}

CVector haar_ket(std::size_t d, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index);
  CVector v(d);
  for (auto& x : v) x = rng.complex_normal();
  const double n = norm2(v);
  for (auto& x : v) x /= n;
  return v;
}

std::vector<double> operator_schmidt_coefficients(const ComplexMatrix& u, std::size_t d_first, std::size_t d_second) {
  return svd(realign(u, d_first, d_second)).singular_values;
}

bool is_local_unitary(const ComplexMatrix& u, std::size_t d_first, std::size_t d_second, double tol) {
  const auto s = operator_schmidt_coefficients(u, d_first, d_second);
  return s.size() < 2 || s[1] < tol * s[0];
}

Dilation dilation_from_state(const JointPureState& phi) {
  const std::size_t n = phi.dim();
  ComplexMatrix basis(n, n);
  basis.set_column(0, phi.amplitudes());
  std::size_t filled = 1;
  for (std::size_t e = 0; e < n && filled < n; ++e) {
    CVector v(n, cplx(0.0, 0.0));
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < filled; ++j) {
        cplx proj = 0.0;
        for (std::size_t r = 0; r < n; ++r) proj += std::conj(basis(r, j)) * v[r];
        for (std::size_t r = 0; r < n; ++r) v[r] -= proj * basis(r, j);
      }
    }
    const double nrm = norm2(v);
    if (nrm < 1e-8) continue;
    for (auto& x : v) x /= nrm;
    basis.set_column(filled++, v);
  }
  CVector e0(n, cplx(0.0, 0.0));
  e0[0] = 1.0;
  return {basis, JointPureState(std::move(e0), phi.d_first(), phi.d_second(), phi.system_slot())};
}

ComplexMatrix named_gate(std::string_view name, const GateConvention& conv) {
  if (name == "X" || name == "Y" || name == "Z") return pauli(name);
  if (name == "CNOT") return controlled(pauli("x"), conv);
  if (name == "CPHASE") return controlled(pauli("z"), conv);
  if (name == "SQRT_CNOT") return controlled(unitary_root(pauli("x"), 2, conv.root_branch), conv);
  if (name == "SQRT_CPHASE") return controlled(unitary_root(pauli("z"), 2, conv.root_branch), conv);
  throw UnknownGate("named_gate: unknown gate '" + std::string(name) + "'");
}

ComplexMatrix local_operator(const ComplexMatrix& on_control, const ComplexMatrix& on_target,
                             const GateConvention& conv) {
  return conv.control_slot == Slot::first ? kron(on_control, on_target) : kron(on_target, on_control);
}

}  // namespace redmap
