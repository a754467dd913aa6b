#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "redmap/dynamical_map.hpp"
#include "redmap/quantum_state.hpp"
#include "redmap/tensor_core.hpp"
#include "redmap/unitary_factory.hpp"

namespace redmap {

/// Named parameters and matrices are kept in insertion order so serialized
/// reports are stable.
struct ScenarioReport {
  std::string scenario_id;
  GateConvention convention;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<std::pair<std::string, ComplexMatrix>> matrices;
  Spectrum spectrum;
  Verdict verdict = Verdict::SINGULAR;
  std::optional<double> residual_vs_paper;  // empty when there is no printed reference
  std::vector<std::string> notes;

  const ComplexMatrix& matrix(const std::string& name) const;
  double parameter(const std::string& name) const;
};

/// Convention under which the written reference quantities are read, plus the
/// slot reading of the two-qubit state psi_theta.
struct ReferenceConvention {
  GateConvention gates;
  TensorOrder state_reading;
};

struct ConventionCandidate {
  GateConvention convention;
  TensorOrder state_reading;
  double eq3_residual;         // A2, B2 and B2 eigenvalues over the grid
  double eq2_residual;         // sqrt-CNOT intermediate-map eigenvalues over the grid
  double pre_initial_residual; // distance of sqrtCNOT^dagger psi from {w (x) chi}
  double identity_residual;    // || sqrtCNOT psi - (cos|00> + sin|11>) || up to phase (audit only)
};

struct ConventionFit {
  GateConvention convention;
  TensorOrder state_reading;
  double sup_residual;
  ConventionCandidate best;
  std::vector<ConventionCandidate> candidates;  // enumeration order
  std::vector<std::string> warnings;

  ReferenceConvention reference() const { return {convention, state_reading}; }
};

/// (1/sqrt2)[(1-i)cos t |01> + sin t(-i|10> + |11>)] with amplitudes in written
/// order; the reading says which written factor is the system.
JointPureState psi_theta(double theta, TensorOrder reading);

/// Written product |0>(cos t|0> + sin t|1>), system placed per conv.tensor_order.
JointPureState written_product(double theta, const GateConvention& conv);

/// Closed forms used as references.
std::pair<double, double> sqrtcnot_reference_eigenvalues(double theta);  // (lambda-, lambda+)
ComplexMatrix cnot_twice_reference_a2(double theta);
ComplexMatrix cnot_twice_reference_b2(double theta);
std::pair<double, double> cnot_twice_reference_eigenvalues(double theta);  // sorted
ComplexMatrix sqrtcphase_reference_b(); // theta = pi/4
std::vector<double> sqrtcphase_reference_spectrum();  // ascending, four decimals

/// First-leg CNOT map on the written product.
AMatrix cnot_twice_first_leg(double theta, const GateConvention& conv);

ScenarioReport scenario_sqrtcnot(double theta, const GateConvention& conv, double cond_limit = kDefaultCondLimit);
ScenarioReport scenario_cnot_twice(double theta, const GateConvention& conv, double cond_limit = kDefaultCondLimit);
ScenarioReport scenario_cnot_twice(double theta);
/// sqrt-CPHASE applied to psi_theta; the sqrt-CNOT gate under conv serves as the dilation.
ScenarioReport scenario_sqrtcphase(double theta, const GateConvention& conv, TensorOrder reading,
                                   double cond_limit = kDefaultCondLimit);
ScenarioReport scenario_sqrtcphase(double theta);
ScenarioReport scenario_sqrtcnot(double theta);

struct EntropyPoint {
  double t;
  ComplexMatrix reduced_state;
  double entropy_bits;
  double entropy_nats;
  double residual;  // max entry deviation from the closed form
};

/// |11><11|, the generator with CPHASE = exp(-i pi |11><11|).
ComplexMatrix cphase_generator();
/// |0><0| (x) 1 + |1><1| (x) sigma_z.
ComplexMatrix h_phi_generator();

/// Applies exp(+i h t) to psi_theta(pi/4) with the system on the second written
/// qubit and reports the system state. The closed form compared against is
/// 1/4 [[1, -i e^{-i w t}], [i e^{i w t}, 3]] with w = 1 for cphase_generator and
/// w = -2 for h_phi_generator.
std::vector<EntropyPoint> backward_entropy_profile(const std::vector<double>& t_grid);
std::vector<EntropyPoint> backward_entropy_profile(const std::vector<double>& t_grid, const ComplexMatrix& generator,
                                                   double frequency);

struct PreInitialSearch {
  std::optional<double> s;  // smallest s with entropy below tol
  double min_entropy_bits;
  double s_at_min;
};

/// Scans the entanglement of exp(+i h s) phi on a uniform grid over [0, s_max]
/// and refines each local minimum by golden section to width 1e-10.
PreInitialSearch search_pre_initial(const JointPureState& phi, const ComplexMatrix& h, double s_max, int grid_n,
                                    double tol);

struct CpInducing {
  ComplexMatrix u2;         // exp(-i h s)
  ComplexMatrix h;          // principal log of u_prime
  ComplexMatrix u_prime;    // u_prime * pre_product = phi
  JointPureState pre_product;
  AMatrix map;
  CpResult cp;
};

/// Throws MaximallyEntangled, NotLocalUnitary, or Error for s outside (0, 1].
CpInducing cp_inducing_unitary(const JointPureState& phi, const ComplexMatrix& v_local, double s);

struct AugmentationResult {
  bool locality_preserved;
  double conjugated_schmidt_ratio;  // second / first operator-Schmidt coefficient of u_se^dagger u_l u_se
  Verdict verdict;                  // map of u_se u_l on phi
  double min_eigenvalue;
  Verdict base_verdict;             // map of u_se alone on phi
};

/// phi must equal u_se applied to a product state.
AugmentationResult augmentation_check(const ComplexMatrix& u_se, const ComplexMatrix& u_l, const JointPureState& phi);

struct DimensionRatio {
  double exact;
  double paper_approx;
  double limit;
};

DimensionRatio dimension_ratio(int d_s, int d_e);

enum class Ensemble { haar_full, theorem_family };
std::string_view to_string(Ensemble e);
Ensemble ensemble_from_string(std::string_view name);

struct McFraction {
  double fraction;
  double stderr_;
  std::size_t n_cp;
  std::size_t n_ncp;
  std::size_t n_singular;
};

/// Samples are indexed by (seed, i) so the result does not depend on threads.
McFraction mc_cp_fraction(const JointPureState& phi, Ensemble ensemble, std::size_t n, std::uint64_t seed,
                          unsigned threads = 1);

/// Random Hermitian generator (d = 4), random product state and times 0 < s < t <= 2.
struct ProductCase {
  ComplexMatrix h;
  JointPureState product;
  double s;
  double t;
};

ProductCase random_product_case(std::uint64_t seed, std::uint64_t index);

struct ProductCaseOutcome {
  double condition_number;  // of A(exp(-i h s))
  std::optional<CpResult> cp;  // empty when the first leg is not invertible under cond_limit
};

/// Intermediate map A(exp(-i h t)) A(exp(-i h s))^-1 on the product state.
ProductCaseOutcome product_case_intermediate(const ProductCase& c, double cond_limit = 1e8);

/// theta_k = (k + 1/2) pi / 128, k = 0..63.
std::vector<double> default_theta_grid();

/// Enumerates control slot x root branch x tensor order x state reading.
/// Throws NoConventionFits when no candidate reproduces the CNOT-twice
/// quantities within 1e-6.
ConventionFit convention_search(const std::vector<double>& theta_grid, unsigned threads = 1);

/// convention_search over default_theta_grid(), computed once.
const ConventionFit& reference_convention_fit();
ReferenceConvention reference_convention();

}  // namespace redmap
