#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "redmap/errors.hpp"
#include "redmap/scenario_lab.hpp"
#include "support.hpp"

using namespace redmap;
using testing::check_close;
using testing::kI;
using testing::kPi;

TEST_CASE("convention search picks a unique fit") {
  const ConventionFit& fit = reference_convention_fit();
  CHECK(fit.candidates.size() == 16);
  CHECK(fit.best.eq3_residual <= 1e-10);
  CHECK(fit.best.eq2_residual <= 1e-8);
  CHECK(fit.best.pre_initial_residual <= 1e-10);
  CHECK(fit.convention == GateConvention(Slot::second, RootBranch::principal, TensorOrder::SE));
  CHECK(fit.state_reading == TensorOrder::ES);

  std::size_t full = 0;
  for (const auto& c : fit.candidates)
    full += c.eq3_residual <= 1e-6 && c.eq2_residual <= 1e-6 && c.pre_initial_residual <= 1e-6 ? 1 : 0;
  CHECK(full == 1);
}

TEST_CASE("convention search validates its grid") {
  CHECK_THROWS_AS(convention_search({0.1, 0.2, 0.3}), ConfigError);
  std::vector<double> grid = default_theta_grid();
  grid.back() = kPi / 4 + 1e-4;
  CHECK_THROWS_AS(convention_search(grid), ConfigError);
  const auto g = default_theta_grid();
  CHECK(g.size() == 64);
  CHECK(g.front() == doctest::Approx(0.5 * kPi / 128));
}

TEST_CASE("convention search is independent of the thread count") {
  const auto grid = default_theta_grid();
  const ConventionFit a = convention_search(grid, 1);
  const ConventionFit b = convention_search(grid, 3);
  REQUIRE(a.candidates.size() == b.candidates.size());
  for (std::size_t k = 0; k < a.candidates.size(); ++k) {
    CHECK(a.candidates[k].eq2_residual == b.candidates[k].eq2_residual);
    CHECK(a.candidates[k].eq3_residual == b.candidates[k].eq3_residual);
  }
}

TEST_CASE("CNOT twice matches the closed forms") {
  for (double t : {kPi / 12, kPi / 6, kPi / 5, 0.05, 1.0}) {
    const ScenarioReport r = scenario_cnot_twice(t);
    REQUIRE(r.residual_vs_paper.has_value());
    CHECK(*r.residual_vs_paper <= 1e-10);
    check_close(r.matrix("A2"), cnot_twice_reference_a2(t), 1e-10);
    check_close(r.matrix("B2"), cnot_twice_reference_b2(t), 1e-10);
  }
  const ScenarioReport r = scenario_cnot_twice(kPi / 6);
  const std::vector<double> expect{-1.0, 0.0, 0.0, 3.0};
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(r.spectrum.eigenvalues[k] - expect[k]) < 1e-10);
  CHECK(r.verdict == Verdict::NCP);
  CHECK_THROWS_AS(scenario_cnot_twice(kPi / 4), SingularMap);
}

TEST_CASE("CNOT-twice first leg conditioning near the singular point") {
  const GateConvention conv = reference_convention().gates;
  for (double d : {1e-3, 1e-6, 1e-9}) {
    const double k = condition_number(cnot_twice_first_leg(kPi / 4 + d, conv).matrix());
    CHECK(k == doctest::Approx(1.0 / (2.0 * d)).epsilon(1e-4));
  }
}

TEST_CASE("sqrt-CNOT intermediate map follows the closed form and stays CP") {
  for (double t : default_theta_grid()) {
    const ScenarioReport r = scenario_sqrtcnot(t);
    CHECK(*r.residual_vs_paper <= 1e-8);
    CHECK(r.parameter("lambda_minus") >= -1e-8);
    CHECK(r.verdict == Verdict::CP);
  }
  const double frozen[][3] = {{0.1, 0.01011720519729942, 1.9898827948027007},
                              {0.5, 0.327746763445393, 1.672253236554607},
                              {1.2, 0.16068300700140292, 1.839316992998597}};
  for (const auto& f : frozen) {
    const auto [lo, hi] = sqrtcnot_reference_eigenvalues(f[0]);
    CHECK(std::abs(lo - f[1]) < 1e-14);
    CHECK(std::abs(hi - f[2]) < 1e-14);
    const ScenarioReport r = scenario_sqrtcnot(f[0]);
    CHECK(std::abs(r.parameter("lambda_minus") - f[1]) < 1e-8);
    CHECK(std::abs(r.parameter("lambda_plus") - f[2]) < 1e-8);
  }
}

TEST_CASE("sqrt-CPHASE on psi is not CP at a quarter turn") {
  const ScenarioReport r = scenario_sqrtcphase(kPi / 4);
  const double frozen[] = {-0.23623682295836335, -0.07032614191801301, 0.5291300417718158, 1.7774329231045607};
  for (int k = 0; k < 4; ++k) CHECK(std::abs(r.spectrum.eigenvalues[k] - frozen[k]) < 1e-10);
  CHECK(r.verdict == Verdict::NCP);
  CHECK(r.parameter("spectrum_sum") == doctest::Approx(2.0).epsilon(1e-12));
  check_close(r.matrix("B"), sqrtcphase_reference_b(), 1e-10);
  REQUIRE(r.residual_vs_paper.has_value());
  CHECK(*r.residual_vs_paper <= 5e-4);
  CHECK_FALSE(scenario_sqrtcphase(0.3).residual_vs_paper.has_value());
}

TEST_CASE("backward CPHASE profile matches the closed form for both generators") {
  std::vector<double> grid;
  for (int k = 0; k <= 64; ++k) grid.push_back(2 * kPi * k / 64);
  const auto a = backward_entropy_profile(grid);
  const auto b = backward_entropy_profile(grid, h_phi_generator(), -2.0);
  for (const auto* prof : {&a, &b}) {
    for (const auto& p : *prof) {
      CHECK(p.residual <= 1e-10);
      CHECK(std::abs(p.entropy_bits - 0.6008760366928562) < 1e-9);
      CHECK(std::abs(p.entropy_nats - 0.4164955306996875) < 1e-9);
    }
  }
  const ComplexMatrix at0 = 0.25 * ComplexMatrix{{1.0, -kI}, {kI, 3.0}};
  check_close(a.front().reduced_state, at0, 1e-12);
  // The printed closed-form constant is a different number.
  const double printed = 0.25 * (5.0 - 2.0 * std::sqrt(2.0) * std::atanh(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(printed - 0.6267747598597695) < 1e-14);
  CHECK(std::abs(printed - a.front().entropy_bits) > 0.02);
}

TEST_CASE("pre-initial search finds a planted product") {
  const CVector plus{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  const JointPureState prod = JointPureState::product(plus, plus, Slot::second);
  const ComplexMatrix h = cphase_generator();
  const JointPureState phi = prod.evolved(unitary_exp(h, 1.0));
  CHECK(entanglement_entropy(phi) > 0.1);

  const PreInitialSearch s = search_pre_initial(phi, h, 2 * kPi, 256, 1e-9);
  REQUIRE(s.s.has_value());
  CHECK(std::abs(*s.s - 1.0) < 1e-6);
  CHECK(s.min_entropy_bits < 1e-9);

  const PreInitialSearch none = search_pre_initial(psi_theta(kPi / 4, TensorOrder::ES), h, 2 * kPi, 256, 1e-9);
  CHECK_FALSE(none.s.has_value());
  CHECK(std::abs(none.min_entropy_bits - 0.600876) < 1e-6);

  const PreInitialSearch trivial = search_pre_initial(prod, h, 2 * kPi, 64, 1e-9);
  REQUIRE(trivial.s.has_value());
  CHECK(*trivial.s == doctest::Approx(0.0));
}

TEST_CASE("cp_inducing_unitary structure and rejections") {
  const ReferenceConvention pc = reference_convention();
  const JointPureState phi = psi_theta(kPi / 6, pc.state_reading).with_system_slot(pc.gates.system_slot());
  for (double s : {0.25, 0.5, 1.0}) {
    const CpInducing c = cp_inducing_unitary(phi, ComplexMatrix::identity(4), s);
    CHECK(is_unitary(c.u2));
    CHECK(is_hermitian(c.h));
    CHECK(is_product(c.pre_product));
    check_close(c.u2, unitary_exp(c.h, s), 1e-12);
    CHECK(phase_insensitive_distance(c.pre_product.evolved(c.u_prime).amplitudes(), phi.amplitudes()) < 1e-10);
    CHECK(tp_check(c.map, 1e-8));
  }
  const double r = 1.0 / std::sqrt(2.0);
  CHECK_THROWS_AS(cp_inducing_unitary(JointPureState({r, 0.0, 0.0, r}, 2, 2, Slot::first),
                                      ComplexMatrix::identity(4), 0.5),
                  MaximallyEntangled);
  CHECK_THROWS_AS(cp_inducing_unitary(phi, named_gate("CNOT", pc.gates), 0.5), NotLocalUnitary);
  CHECK_THROWS_AS(cp_inducing_unitary(phi, ComplexMatrix::identity(4), 0.0), Error);
  CHECK_THROWS_AS(cp_inducing_unitary(phi, ComplexMatrix::identity(4), 1.5), Error);
}

TEST_CASE("augmentation keeps CP exactly when locality is preserved") {
  const ReferenceConvention pc = reference_convention();
  const ComplexMatrix u = named_gate("SQRT_CNOT", pc.gates);
  for (double t : {kPi / 6, 0.4, 1.0}) {
    const JointPureState phi = psi_theta(t, pc.state_reading).with_system_slot(pc.gates.system_slot());
    const auto good = augmentation_check(u, local_operator(pauli("z"), pauli("x"), pc.gates), phi);
    CHECK(good.locality_preserved);
    CHECK(good.base_verdict == Verdict::CP);
    CHECK(good.verdict == Verdict::CP);
    CHECK(good.conjugated_schmidt_ratio < 1e-9);

    const auto bad = augmentation_check(u, local_operator(pauli("x"), pauli("x"), pc.gates), phi);
    CHECK_FALSE(bad.locality_preserved);
    CHECK(bad.conjugated_schmidt_ratio > 0.1);
  }
}

TEST_CASE("dimension ratio") {
  const DimensionRatio r = dimension_ratio(2, 2);
  CHECK(r.paper_approx == 0.5);
  CHECK(r.exact == doctest::Approx(0.4).epsilon(1e-15));
  const DimensionRatio big = dimension_ratio(2, 1 << 10);
  CHECK(std::abs(big.paper_approx * 4 - 1) < 1e-3);
  CHECK(big.limit == doctest::Approx(0.25));
  // dim(SU(d_s) x SU(d_e)) / dim(SU(d_s d_e))
  for (int de = 2; de <= 64; de *= 2) {
    const DimensionRatio x = dimension_ratio(3, de);
    CHECK(x.exact > 0.0);
    CHECK(x.exact < 1.0);
  }
}

TEST_CASE("Monte Carlo fraction is reproducible and thread independent") {
  const ReferenceConvention pc = reference_convention();
  const JointPureState phi = psi_theta(kPi / 6, pc.state_reading).with_system_slot(pc.gates.system_slot());
  for (Ensemble e : {Ensemble::haar_full, Ensemble::theorem_family}) {
    const McFraction a = mc_cp_fraction(phi, e, 64, 11, 1);
    const McFraction b = mc_cp_fraction(phi, e, 64, 11, 4);
    CHECK(a.fraction == b.fraction);
    CHECK(a.n_cp == b.n_cp);
    CHECK(a.n_cp + a.n_ncp + a.n_singular == 64);
    CHECK(a.fraction >= 0.0);
    CHECK(a.fraction <= 1.0);
  }
  CHECK(ensemble_from_string("haar_full") == Ensemble::haar_full);
  CHECK(to_string(Ensemble::theorem_family) == "theorem_family");
  CHECK_THROWS_AS(ensemble_from_string("gaussian"), Error);
}

TEST_CASE("product cases are reproducible and ordered in time") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const ProductCase c = random_product_case(3, i);
    CHECK(c.s > 0.0);
    CHECK(c.s < c.t);
    CHECK(c.t <= 2.0);
    CHECK(is_hermitian(c.h));
    CHECK(is_product(c.product));
    check_close(random_product_case(3, i).h, c.h, 0.0);
  }
  const ProductCaseOutcome o = product_case_intermediate(random_product_case(3, 0));
  CHECK(o.condition_number >= 1.0);
}
