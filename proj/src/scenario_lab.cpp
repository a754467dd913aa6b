#include "redmap/scenario_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include "redmap/errors.hpp"
#include "redmap/parallel.hpp"
#include "redmap/random.hpp"

namespace redmap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFitTol = 1e-6;
const cplx kI(0.0, 1.0);

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// The two eigenvalues of largest magnitude (sorted) and the largest magnitude among the rest.
std::tuple<double, double, double> dominant_pair(const std::vector<double>& ev) {
  std::vector<double> by_mag = ev;
  std::sort(by_mag.begin(), by_mag.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  double rest = 0.0;
  for (std::size_t k = 2; k < by_mag.size(); ++k) rest = std::max(rest, std::abs(by_mag[k]));
  return {std::min(by_mag[0], by_mag[1]), std::max(by_mag[0], by_mag[1]), rest};
}

CVector env_factor(const JointPureState& product) {
  const auto f = product_factors(product);
  if (!f) throw NotPreInitialProduct("state is not a product");
  CVector chi = product.env_slot() == Slot::first ? f->first : f->second;
  const double n = norm2(chi);
  for (auto& x : chi) x /= n;
  return chi;
}

bool near_quarter_pi(double theta, double tol) {
  const double k = std::round((theta - kPi / 4) / (kPi / 2));
  return std::abs(theta - (kPi / 4 + k * kPi / 2)) < tol;
}

}  // namespace

const ComplexMatrix& ScenarioReport::matrix(const std::string& name) const {
  for (const auto& [k, m] : matrices)
    if (k == name) return m;
  throw Error("ScenarioReport: no matrix named '" + name + "'");
}

double ScenarioReport::parameter(const std::string& name) const {
  for (const auto& [k, v] : parameters)
    if (k == name) return v;
  throw Error("ScenarioReport: no parameter named '" + name + "'");
}

JointPureState psi_theta(double theta, TensorOrder reading) {
  const double r = 1.0 / std::numbers::sqrt2;
  CVector a{0.0, r * (1.0 - kI) * std::cos(theta), -kI * r * std::sin(theta), r * std::sin(theta)};
  return JointPureState::normalized(std::move(a), 2, 2, reading == TensorOrder::SE ? Slot::first : Slot::second);
}

JointPureState written_product(double theta, const GateConvention& conv) {
  const CVector zero{1.0, 0.0};
  const CVector chi{std::cos(theta), std::sin(theta)};
  return JointPureState::product(zero, chi, conv.system_slot());
}

std::pair<double, double> sqrtcnot_reference_eigenvalues(double theta) {
  const double c4 = std::cos(4 * theta);
  const double r = std::sqrt(std::max(0.0, 7 + 8 * c4 + std::cos(8 * theta))) / (3 + c4);
  return {1 - r, 1 + r};
}

ComplexMatrix cnot_twice_reference_a2(double theta) {
  const double sec = 1.0 / std::cos(2 * theta);
  const double c = std::cos(theta) * std::cos(theta) * sec;
  const double s = std::sin(theta) * std::sin(theta) * sec;
  return {{c, 0, 0, -s}, {0, c, -s, 0}, {0, -s, c, 0}, {-s, 0, 0, c}};
}

ComplexMatrix cnot_twice_reference_b2(double theta) {
  const double sec = 1.0 / std::cos(2 * theta);
  const double c = std::cos(theta) * std::cos(theta) * sec;
  const double s = std::sin(theta) * std::sin(theta) * sec;
  return {{c, 0, 0, c}, {0, -s, -s, 0}, {0, -s, -s, 0}, {c, 0, 0, c}};
}

std::pair<double, double> cnot_twice_reference_eigenvalues(double theta) {
  const double sec = 1.0 / std::cos(2 * theta);
  const double a = -2 * std::sin(theta) * std::sin(theta) * sec;
  const double b = 2 * std::cos(theta) * std::cos(theta) * sec;
  return {std::min(a, b), std::max(a, b)};
}

ComplexMatrix sqrtcphase_reference_b() {
  ComplexMatrix b{{4.0, 0.0, 1.0 - kI, 2.0 - 2.0 * kI},
                  {0.0, 0.0, 0.0, -1.0 + kI},
                  {1.0 + kI, 0.0, 0.0, 0.0},
                  {2.0 + 2.0 * kI, -1.0 - kI, 0.0, 4.0}};
  b *= 0.25;
  return b;
}

std::vector<double> sqrtcphase_reference_spectrum() { return {-0.2362, -0.0703, 0.5291, 1.7774}; }

AMatrix cnot_twice_first_leg(double theta, const GateConvention& conv) {
  return map_from_dilation(named_gate("CNOT", conv), written_product(theta, conv));
}

ScenarioReport scenario_sqrtcnot(double theta, const GateConvention& conv, double cond_limit) {
  const JointPureState pre = written_product(theta, conv);
  const ComplexMatrix u1 = named_gate("SQRT_CNOT", conv);
  const AMatrix first = map_from_dilation(u1, pre);
  const AMatrix total = map_from_dilation(u1 * u1, pre);
  const AMatrix a = intermediate_a(total, first, cond_limit);
  const ChoiMatrix b = choi_from_a(a);
  CpResult cp = cp_check(b);

  const auto [lo, hi, rest] = dominant_pair(cp.spectrum.eigenvalues);
  const auto [ref_lo, ref_hi] = sqrtcnot_reference_eigenvalues(theta);
  const double residual = std::max({std::abs(lo - ref_lo), std::abs(hi - ref_hi), rest});

  ScenarioReport r{"sqrtcnot", conv, {{"theta", theta}}, {}, std::move(cp.spectrum), cp.verdict, residual, {}};
  r.matrices = {{"A_first", first.matrix()}, {"A_total", total.matrix()}, {"A", a.matrix()}, {"B", b.matrix()}};
  r.parameters.emplace_back("lambda_minus", lo);
  r.parameters.emplace_back("lambda_plus", hi);
  r.parameters.emplace_back("lambda_minus_reference", ref_lo);
  r.parameters.emplace_back("lambda_plus_reference", ref_hi);
  return r;
}

ScenarioReport scenario_cnot_twice(double theta, const GateConvention& conv, double cond_limit) {
  const JointPureState pre = written_product(theta, conv);
  const ComplexMatrix cnot = named_gate("CNOT", conv);
  const AMatrix a1 = map_from_dilation(cnot, pre);
  const AMatrix total = map_from_dilation(cnot * cnot, pre);
  const AMatrix a2 = intermediate_a(total, a1, cond_limit);
  const ChoiMatrix b2 = choi_from_a(a2);
  CpResult cp = cp_check(b2);

  const auto [lo, hi, rest] = dominant_pair(cp.spectrum.eigenvalues);
  const auto [ref_lo, ref_hi] = cnot_twice_reference_eigenvalues(theta);
  const double residual = std::max({max_abs_diff(a2.matrix(), cnot_twice_reference_a2(theta)),
                                    max_abs_diff(b2.matrix(), cnot_twice_reference_b2(theta)),
                                    std::abs(lo - ref_lo), std::abs(hi - ref_hi), rest});

  ScenarioReport r{"cnot_twice", conv, {{"theta", theta}}, {}, std::move(cp.spectrum), cp.verdict, residual, {}};
  r.matrices = {{"A1", a1.matrix()}, {"A2", a2.matrix()}, {"B2", b2.matrix()}};
  r.parameters.emplace_back("condition_number_A1", condition_number(a1.matrix()));
  r.parameters.emplace_back("lambda_minus", lo);
  r.parameters.emplace_back("lambda_plus", hi);
  return r;
}

ScenarioReport scenario_cnot_twice(double theta) { return scenario_cnot_twice(theta, reference_convention().gates); }

ScenarioReport scenario_sqrtcnot(double theta) { return scenario_sqrtcnot(theta, reference_convention().gates); }

ScenarioReport scenario_sqrtcphase(double theta, const GateConvention& conv, TensorOrder reading, double cond_limit) {
  const JointPureState phi = psi_theta(theta, reading).with_system_slot(conv.system_slot());
  ComplexMatrix u1 = named_gate("SQRT_CNOT", conv);
  std::vector<std::string> notes;
  if (!is_product(phi.evolved(u1.adjoint()))) {
    u1 = dilation_from_state(phi).unitary;
    notes.emplace_back("sqrt-CNOT does not map a product state onto psi under this convention; "
                       "a Gram-Schmidt dilation was used instead");
  }
  const ComplexMatrix u2 = named_gate("SQRT_CPHASE", conv);
  const AMatrix a = intermediate_map_on_state(phi, u1, u2, cond_limit);
  const ChoiMatrix b = choi_from_a(a);
  CpResult cp = cp_check(b);

  std::optional<double> residual;
  if (std::abs(theta - kPi / 4) < 1e-12) {
    const auto ref = sqrtcphase_reference_spectrum();
    double worst = max_abs_diff(b.matrix(), sqrtcphase_reference_b());
    for (std::size_t k = 0; k < ref.size(); ++k) worst = std::max(worst, std::abs(cp.spectrum.eigenvalues[k] - ref[k]));
    residual = worst;
  } else {
    notes.emplace_back("no printed reference at this theta");
  }

  ScenarioReport r{"sqrtcphase", conv, {{"theta", theta}}, {}, std::move(cp.spectrum), cp.verdict, residual,
                   std::move(notes)};
  r.matrices = {{"A", a.matrix()}, {"B", b.matrix()}};
  double tr = 0.0;
  for (double l : r.spectrum.eigenvalues) tr += l;
  r.parameters.emplace_back("spectrum_sum", tr);
  return r;
}

ScenarioReport scenario_sqrtcphase(double theta) {
  const ReferenceConvention pc = reference_convention();
  return scenario_sqrtcphase(theta, pc.gates, pc.state_reading);
}

ComplexMatrix cphase_generator() {
  ComplexMatrix h(4, 4);
  h(3, 3) = 1.0;
  return h;
}

ComplexMatrix h_phi_generator() {
  const ComplexMatrix p0{{1.0, 0.0}, {0.0, 0.0}};
  const ComplexMatrix p1{{0.0, 0.0}, {0.0, 1.0}};
  return kron(p0, ComplexMatrix::identity(2)) + kron(p1, pauli("z"));
}

std::vector<EntropyPoint> backward_entropy_profile(const std::vector<double>& t_grid) {
  return backward_entropy_profile(t_grid, cphase_generator(), 1.0);
}

std::vector<EntropyPoint> backward_entropy_profile(const std::vector<double>& t_grid, const ComplexMatrix& generator,
                                                   double frequency) {
  const JointPureState psi = psi_theta(kPi / 4, TensorOrder::ES);
  std::vector<EntropyPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const JointPureState moved = psi.evolved(unitary_exp(generator, -t));
    DensityMatrix rho = reduced_state(moved, psi.system_slot());
    const cplx ph = std::exp(kI * (frequency * t));
    ComplexMatrix ref{{0.25, -0.25 * kI * std::conj(ph)}, {0.25 * kI * ph, 0.75}};
    out.push_back({t, rho.matrix(), vn_entropy(rho, EntropyBase::bits), vn_entropy(rho, EntropyBase::nats),
                   max_abs_diff(rho.matrix(), ref)});
  }
  return out;
}

PreInitialSearch search_pre_initial(const JointPureState& phi, const ComplexMatrix& h, double s_max, int grid_n,
                                    double tol) {
  if (!(s_max > 0.0) || grid_n < 2) throw Error("search_pre_initial: need s_max > 0 and grid_n >= 2");
  const Spectrum sp = eigh(h);
  auto entropy_at = [&](double s) {
    CVector ph(sp.eigenvalues.size());
    for (std::size_t k = 0; k < ph.size(); ++k) ph[k] = std::exp(kI * (sp.eigenvalues[k] * s));
    const ComplexMatrix u = sp.eigenvectors * ComplexMatrix::diagonal(ph) * sp.eigenvectors.adjoint();
    return entanglement_entropy(phi.evolved(u), EntropyBase::bits);
  };

  const auto n = static_cast<std::size_t>(grid_n);
  std::vector<double> s(n + 1), e(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    s[k] = s_max * static_cast<double>(k) / static_cast<double>(n);
    e[k] = entropy_at(s[k]);
  }

  PreInitialSearch out{std::nullopt, e[0], 0.0};
  if (e[0] < tol) {
    out.s = 0.0;
    return out;
  }
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const bool left_ok = k == 0 || e[k] <= e[k - 1];
    const bool right_ok = k == n || e[k] <= e[k + 1];
    if (!(left_ok && right_ok)) continue;
    double a = s[k == 0 ? 0 : k - 1];
    double b = s[k == n ? n : k + 1];
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = entropy_at(x1), f2 = entropy_at(x2);
    while (b - a > 1e-10) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = entropy_at(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = entropy_at(x2);
      }
    }
    double best_s = 0.5 * (a + b);
    double best_e = entropy_at(best_s);
    if (e[k] < best_e) {
      best_s = s[k];
      best_e = e[k];
    }
    if (best_e < out.min_entropy_bits) {
      out.min_entropy_bits = best_e;
      out.s_at_min = best_s;
    }
    if (best_e < tol && (!out.s || best_s < *out.s)) out.s = best_s;
  }
  return out;
}

CpInducing cp_inducing_unitary(const JointPureState& phi, const ComplexMatrix& v_local, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw Error("cp_inducing_unitary: s must lie in (0, 1]");
  if (is_maximally_entangled(phi)) {
    throw MaximallyEntangled("cp_inducing_unitary: the initial state is maximally entangled");
  }
  if (v_local.rows() != phi.dim() || !is_unitary(v_local) ||
      !is_local_unitary(v_local, phi.d_first(), phi.d_second())) {
    throw NotLocalUnitary("cp_inducing_unitary: pre-rotation is not a local unitary");
  }
  const Dilation d = dilation_from_state(phi);
  const ComplexMatrix u_prime = d.unitary * v_local.adjoint();
  const JointPureState pre = d.pre_product.evolved(v_local);
  const ComplexMatrix h = logm_unitary(u_prime);
  const ComplexMatrix u2 = unitary_exp(h, s);
  AMatrix map = intermediate_map_on_state(phi, u_prime, u2);
  CpResult cp = cp_check(choi_from_a(map));
  return {u2, h, u_prime, pre, std::move(map), std::move(cp)};
}

AugmentationResult augmentation_check(const ComplexMatrix& u_se, const ComplexMatrix& u_l, const JointPureState& phi) {
  if (!is_local_unitary(u_l, phi.d_first(), phi.d_second())) {
    throw NotLocalUnitary("augmentation_check: u_l is not a local unitary");
  }
  const auto coeffs = operator_schmidt_coefficients(u_se.adjoint() * u_l * u_se, phi.d_first(), phi.d_second());
  const double ratio = coeffs.size() > 1 ? coeffs[1] / coeffs[0] : 0.0;
  const CpResult cp = cp_check(choi_from_a(intermediate_map_on_state(phi, u_se, u_se * u_l)));
  const CpResult base = cp_check(choi_from_a(intermediate_map_on_state(phi, u_se, u_se)));
  return {ratio < 1e-9, ratio, cp.verdict, cp.min_eigenvalue, base.verdict};
}

DimensionRatio dimension_ratio(int d_s, int d_e) {
  if (d_s < 2 || d_e < 2) throw Error("dimension_ratio: dimensions must be >= 2");
  const double s2 = static_cast<double>(d_s) * d_s;
  const double e2 = static_cast<double>(d_e) * d_e;
  return {(s2 - 1 + e2 - 1) / (s2 * e2 - 1), (s2 + e2) / (s2 * e2), 1.0 / s2};
}

std::string_view to_string(Ensemble e) { return e == Ensemble::haar_full ? "haar_full" : "theorem_family"; }

Ensemble ensemble_from_string(std::string_view name) {
  if (name == "haar_full") return Ensemble::haar_full;
  if (name == "theorem_family") return Ensemble::theorem_family;
  throw ConfigError("unknown ensemble '" + std::string(name) + "'");
}

McFraction mc_cp_fraction(const JointPureState& phi, Ensemble ensemble, std::size_t n, std::uint64_t seed,
                          unsigned threads) {
  if (n == 0) throw ConfigError("mc_cp_fraction: n must be >= 1");
  if (is_maximally_entangled(phi)) throw MaximallyEntangled("mc_cp_fraction: the initial state is maximally entangled");
  const Dilation dil = dilation_from_state(phi);
  const std::uint64_t seed_first = splitmix64(seed ^ 0x243f6a8885a308d3ULL);
  const std::uint64_t seed_second = splitmix64(seed ^ 0x13198a2e03707344ULL);
  const std::uint64_t seed_s = splitmix64(seed ^ 0xa4093822299f31d0ULL);

  std::vector<Verdict> verdicts(n, Verdict::SINGULAR);
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      if (ensemble == Ensemble::haar_full) {
        const ComplexMatrix u = haar_unitary(phi.dim(), seed, i);
        verdicts[i] = cp_check(choi_from_a(intermediate_map_on_state(phi, dil.unitary, u))).verdict;
      } else {
        const ComplexMatrix v =
            kron(haar_unitary(phi.d_first(), seed_first, i), haar_unitary(phi.d_second(), seed_second, i));
        CounterRng rng(seed_s, i);
        const double s = 1.0 - rng.uniform();
        verdicts[i] = cp_inducing_unitary(phi, v, s).cp.verdict;
      }
    } catch (const SingularMap&) {
      verdicts[i] = Verdict::SINGULAR;
    }
  });

  McFraction out{0.0, 0.0, 0, 0, 0};
  for (Verdict v : verdicts) {
    if (v == Verdict::CP) ++out.n_cp;
    else if (v == Verdict::NCP) ++out.n_ncp;
    else ++out.n_singular;
  }
  const double m = static_cast<double>(out.n_cp + out.n_ncp);
  if (m == 0) {
    out.fraction = std::numeric_limits<double>::quiet_NaN();
    out.stderr_ = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.fraction = static_cast<double>(out.n_cp) / m;
    out.stderr_ = std::sqrt(out.fraction * (1.0 - out.fraction) / m);
  }
  return out;
}

ProductCase random_product_case(std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(splitmix64(seed ^ 0x082efa98ec4e6c89ULL), index);
  ComplexMatrix g(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) g(r, c) = rng.complex_normal();
  ComplexMatrix h = (g + g.adjoint()) * 0.5;
  CVector a(2), b(2);
  for (auto& x : a) x = rng.complex_normal();
  for (auto& x : b) x = rng.complex_normal();
  double s = 2.0 * (1.0 - rng.uniform());
  double t = 2.0 * (1.0 - rng.uniform());
  while (s == t) t = 2.0 * (1.0 - rng.uniform());
  if (s > t) std::swap(s, t);
  return {std::move(h), JointPureState::product(a, b, Slot::first), s, t};
}

ProductCaseOutcome product_case_intermediate(const ProductCase& c, double cond_limit) {
  const AMatrix first = map_from_dilation(unitary_exp(c.h, c.s), c.product);
  const AMatrix total = map_from_dilation(unitary_exp(c.h, c.t), c.product);
  ProductCaseOutcome out{condition_number(first.matrix()), std::nullopt};
  if (out.condition_number < cond_limit) out.cp = cp_check(choi_from_a(intermediate_a(total, first, cond_limit)));
  return out;
}

std::vector<double> default_theta_grid() {
  std::vector<double> g(64);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = (static_cast<double>(k) + 0.5) * kPi / 128.0;
  return g;
}

namespace {

double pre_initial_residual(double theta, const GateConvention& conv, TensorOrder reading) {
  const JointPureState psi = psi_theta(theta, reading).with_system_slot(conv.system_slot());
  const JointPureState pre = psi.evolved(named_gate("SQRT_CNOT", conv).adjoint());
  const CVector chi = env_factor(written_product(theta, conv));
  // Project pre onto {w (x) chi : w arbitrary}.
  const std::size_t ds = pre.d_system(), de = pre.d_env();
  auto idx = [&](std::size_t s, std::size_t e) { return pre.system_slot() == Slot::first ? s * de + e : e * ds + s; };
  double miss = 0.0;
  for (std::size_t s = 0; s < ds; ++s) {
    cplx w = 0.0;
    for (std::size_t e = 0; e < de; ++e) w += std::conj(chi[e]) * pre.amplitudes()[idx(s, e)];
    for (std::size_t e = 0; e < de; ++e) miss += std::norm(pre.amplitudes()[idx(s, e)] - w * chi[e]);
  }
  return std::sqrt(miss);
}

double identity_residual(double theta, const GateConvention& conv, TensorOrder reading) {
  const JointPureState psi = psi_theta(theta, reading).with_system_slot(conv.system_slot());
  const CVector target{std::cos(theta), 0.0, 0.0, std::sin(theta)};
  return phase_insensitive_distance(psi.evolved(named_gate("SQRT_CNOT", conv)).amplitudes(), target);
}

template <class F>
double sup_over(const std::vector<double>& grid, F&& f) {
  double worst = 0.0;
  for (double theta : grid) {
    double r;
    try {
      r = f(theta);
    } catch (const Error&) {
      r = std::numeric_limits<double>::infinity();
    }
    if (!(r <= worst)) worst = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
  }
  return worst;
}

}  // namespace

ConventionFit convention_search(const std::vector<double>& theta_grid, unsigned threads) {
  if (theta_grid.size() < 8) throw ConfigError("convention_search: need at least 8 theta values");
  for (double t : theta_grid) {
    if (!std::isfinite(t) || near_quarter_pi(t, 1e-3)) {
      throw ConfigError("convention_search: theta " + fmt(t) + " is inside the singular neighbourhood");
    }
  }

  std::vector<GateConvention> gates;
  for (TensorOrder order : {TensorOrder::SE, TensorOrder::ES})
    for (Slot control : {Slot::first, Slot::second})
      for (RootBranch branch : {RootBranch::principal, RootBranch::alternate}) gates.emplace_back(control, branch, order);

  std::vector<std::array<double, 2>> map_residuals(gates.size());
  parallel_for(gates.size(), threads, [&](std::size_t c) {
    const GateConvention& g = gates[c];
    map_residuals[c][0] =
        sup_over(theta_grid, [&](double t) { return *scenario_cnot_twice(t, g).residual_vs_paper; });
    map_residuals[c][1] = sup_over(theta_grid, [&](double t) { return *scenario_sqrtcnot(t, g).residual_vs_paper; });
  });

  ConventionFit fit{gates.front(), TensorOrder::ES, 0.0, {gates.front(), TensorOrder::ES, 0, 0, 0, 0}, {}, {}};
  for (std::size_t c = 0; c < gates.size(); ++c) {
    for (TensorOrder reading : {TensorOrder::ES, TensorOrder::SE}) {
      fit.candidates.push_back(
          {gates[c], reading, map_residuals[c][0], map_residuals[c][1],
           sup_over(theta_grid, [&](double t) { return pre_initial_residual(t, gates[c], reading); }),
           sup_over(theta_grid, [&](double t) { return identity_residual(t, gates[c], reading); })});
    }
  }

  auto key = [](const ConventionCandidate& c) {
    return std::make_tuple(c.eq3_residual > kFitTol, c.eq2_residual > kFitTol, c.pre_initial_residual > kFitTol);
  };
  const auto best = std::min_element(fit.candidates.begin(), fit.candidates.end(),
                                     [&](const auto& a, const auto& b) { return key(a) < key(b); });
  if (!(best->eq3_residual <= kFitTol)) {
    throw NoConventionFits("convention_search: best CNOT-twice residual " + fmt(best->eq3_residual) +
                           " exceeds 1e-6");
  }
  fit.best = *best;
  fit.convention = best->convention;
  fit.state_reading = best->state_reading;
  fit.sup_residual = std::max(best->eq3_residual, best->eq2_residual);
  if (best->eq2_residual > kFitTol) {
    fit.warnings.push_back("sqrt-CNOT intermediate-map spectrum deviates from its closed form by " +
                           fmt(best->eq2_residual));
  }
  if (best->pre_initial_residual > kFitTol) {
    fit.warnings.push_back("psi is not sqrt-CNOT applied to a product with the written environment factor (residual " +
                           fmt(best->pre_initial_residual) + ")");
  }
  if (best->identity_residual > kFitTol) {
    fit.warnings.push_back("sqrt-CNOT psi differs from cos|00> + sin|11> by " + fmt(best->identity_residual) +
                           " up to phase; psi arises from a system factor other than |0>");
  }
  return fit;
}

const ConventionFit& reference_convention_fit() {
  static const ConventionFit fit = convention_search(default_theta_grid());
  return fit;
}

ReferenceConvention reference_convention() { return reference_convention_fit().reference(); }

}  // namespace redmap
