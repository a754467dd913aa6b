#include "redmap/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "redmap/errors.hpp"

namespace redmap {

JointPureState::JointPureState(CVector amplitudes, std::size_t d_first, std::size_t d_second, Slot system_slot)
    : amplitudes_(std::move(amplitudes)), d_first_(d_first), d_second_(d_second), system_slot_(system_slot) {
  if (d_first == 0 || d_second == 0 || amplitudes_.size() != d_first * d_second) {
    throw InvalidState("JointPureState: " + std::to_string(amplitudes_.size()) + " amplitudes for " +
                       std::to_string(d_first) + "x" + std::to_string(d_second));
  }
  const double n = norm2(amplitudes_);
  if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-12) {
    throw InvalidState("JointPureState: norm " + std::to_string(n) + " is not 1");
  }
}

JointPureState JointPureState::normalized(CVector amplitudes, std::size_t d_first, std::size_t d_second,
                                          Slot system_slot) {
  const double n = norm2(amplitudes);
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidState("JointPureState: cannot normalize a zero vector");
  for (auto& a : amplitudes) a /= n;
  return JointPureState(std::move(amplitudes), d_first, d_second, system_slot);
}

JointPureState JointPureState::product(std::span<const cplx> first, std::span<const cplx> second, Slot system_slot) {
  CVector amps(first.size() * second.size());
  for (std::size_t i = 0; i < first.size(); ++i)
    for (std::size_t j = 0; j < second.size(); ++j) amps[i * second.size() + j] = first[i] * second[j];
  return normalized(std::move(amps), first.size(), second.size(), system_slot);
}

ComplexMatrix JointPureState::coefficients() const { return ComplexMatrix(d_first_, d_second_, amplitudes_); }

ComplexMatrix JointPureState::projector() const { return ComplexMatrix::outer(amplitudes_, amplitudes_); }

JointPureState JointPureState::with_system_slot(Slot slot) const {
  if (slot == system_slot_) return *this;
  CVector swapped(amplitudes_.size());
  for (std::size_t i = 0; i < d_first_; ++i)
    for (std::size_t j = 0; j < d_second_; ++j) swapped[j * d_first_ + i] = amplitudes_[i * d_second_ + j];
  return JointPureState(std::move(swapped), d_second_, d_first_, slot);
}

JointPureState JointPureState::evolved(const ComplexMatrix& u) const {
  return normalized(u * std::span<const cplx>(amplitudes_), d_first_, d_second_, system_slot_);
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {
  if (!matrix_.square() || matrix_.empty()) throw InvalidState("DensityMatrix: not square");
  if (hermiticity_defect(matrix_) > 1e-10) throw InvalidState("DensityMatrix: not Hermitian");
  if (std::abs(matrix_.trace() - cplx(1.0, 0.0)) > 1e-10) throw InvalidState("DensityMatrix: trace is not 1");
  const auto s = eigh(matrix_);
  if (s.eigenvalues.front() < -1e-10) {
    throw InvalidState("DensityMatrix: negative eigenvalue " + std::to_string(s.eigenvalues.front()));
  }
}

SchmidtDecomposition schmidt(const JointPureState& psi) {
  const SvdResult s = svd(psi.coefficients());
  SchmidtDecomposition out;
  out.coefficients = s.singular_values;
  out.first_basis = s.u;
  out.second_basis = s.v.conj();
  return out;
}

DensityMatrix reduced_state(const JointPureState& psi, Slot keep) {
  ComplexMatrix r = partial_trace(psi.projector(), psi.d_first(), psi.d_second(), keep);
  r = (r + r.adjoint()) * 0.5;
  return DensityMatrix(std::move(r));
}

double shannon_entropy(std::span<const double> probabilities, EntropyBase base) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return base == EntropyBase::bits ? h / std::log(2.0) : h;
}

double entanglement_entropy(const JointPureState& psi, EntropyBase base) {
  const auto s = schmidt(psi);
  std::vector<double> p;
  p.reserve(s.coefficients.size());
  for (double c : s.coefficients) p.push_back(c * c);
  return shannon_entropy(p, base);
}

double vn_entropy(const DensityMatrix& rho, EntropyBase base) {
  auto ev = eigh(rho.matrix()).eigenvalues;
  for (double& l : ev) {
    if (l < -1e-10) throw InvalidState("vn_entropy: eigenvalue " + std::to_string(l));
    l = std::max(l, 0.0);
  }
  return shannon_entropy(ev, base);
}

bool is_product(const JointPureState& psi, double tol) {
  const auto c = schmidt(psi).coefficients;
  return c.size() < 2 || c[1] < tol;
}

bool is_maximally_entangled(const JointPureState& psi, double tol) {
  const auto c = schmidt(psi).coefficients;
  const double target = 1.0 / std::sqrt(static_cast<double>(c.size()));
  return std::all_of(c.begin(), c.end(), [&](double x) { return std::abs(x - target) < tol; });
}

std::optional<ProductFactors> product_factors(const JointPureState& psi, double tol) {
  const auto s = schmidt(psi);
  if (s.coefficients.size() > 1 && s.coefficients[1] >= tol) return std::nullopt;
  ProductFactors f{s.first_basis.column_vector(0), s.second_basis.column_vector(0)};
  for (auto& x : f.first) x *= s.coefficients[0];
  return f;
}

double phase_insensitive_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DimensionMismatch("phase_insensitive_distance: length mismatch");
  // || a - e^{i phi} b || is minimized at phi = arg <b|a>; the difference is
  // formed explicitly because the expanded norm loses half the digits.
  const cplx ov = inner(b, a);
  const cplx phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0, 0.0);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::norm(a[k] - phase * b[k]);
  return std::sqrt(s);
}

}  // namespace redmap
