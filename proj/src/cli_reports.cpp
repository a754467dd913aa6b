#include "redmap/cli_reports.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>

#include "redmap/errors.hpp"
#include "redmap/parallel.hpp"
#include "redmap/report_io.hpp"

namespace redmap::cli {

namespace {

using io::Json;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

double finite_number(const Json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError("'" + key + "' must be finite");
  return v;
}

std::int64_t integer(const Json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  return j.get<std::int64_t>();
}

std::string text(const Json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("'" + key + "' must be a string");
  return j.get<std::string>();
}

std::vector<double> linspace_spec(const Json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("'" + key + "' must be [start, stop, count]");
  const double lo = finite_number(j[0], key);
  const double hi = finite_number(j[1], key);
  const std::int64_t n = integer(j[2], key);
  if (n < 1 || n > 1000000) throw ConfigError("'" + key + "' count out of range: " + std::to_string(n));
  if (n == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  return g;
}

std::vector<double> default_t_grid() {
  std::vector<double> g(64);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = 2.0 * kPi * static_cast<double>(k) / 63.0;
  return g;
}

ReferenceConvention convention_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("'convention' must be an object");
  const std::set<std::string> keys{"control_slot", "root_branch", "tensor_order", "state_reading"};
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw ConfigError("unknown key 'convention." + k + "'");
  for (const auto& k : keys)
    if (!j.contains(k)) throw ConfigError("'convention." + k + "' must be given explicitly");

  const std::string control = text(j["control_slot"], "convention.control_slot");
  const std::string branch = text(j["root_branch"], "convention.root_branch");
  const std::string order = text(j["tensor_order"], "convention.tensor_order");
  const std::string reading = text(j["state_reading"], "convention.state_reading");
  if (control != "first" && control != "second") throw ConfigError("convention.control_slot must be first|second");
  if (branch != "principal" && branch != "alternate") throw ConfigError("convention.root_branch must be principal|alternate");
  if (order != "SE" && order != "ES") throw ConfigError("convention.tensor_order must be SE|ES");
  if (reading != "SE" && reading != "ES") throw ConfigError("convention.state_reading must be SE|ES");
  return {GateConvention(control == "first" ? Slot::first : Slot::second,
                         branch == "principal" ? RootBranch::principal : RootBranch::alternate,
                         order == "SE" ? TensorOrder::SE : TensorOrder::ES),
          reading == "SE" ? TensorOrder::SE : TensorOrder::ES};
}

std::string_view scenario_for(std::string_view command) {
  if (command == "preinitial") return "preinitial";
  if (command == "mcfraction") return "mc";
  if (command == "augment") return "augment";
  if (command == "dimratio") return "dimratio";
  if (command == "conventions") return "conventions";
  if (command == "reproduce-paper") return "reproduce";
  return "";
}

bool is_map_scenario(std::string_view s) { return s == "sqrtcnot" || s == "cnot_twice" || s == "sqrtcphase"; }

ScenarioReport map_scenario(std::string_view id, double theta, const ReferenceConvention& pc) {
  if (id == "sqrtcnot") return scenario_sqrtcnot(theta, pc.gates);
  if (id == "cnot_twice") return scenario_cnot_twice(theta, pc.gates);
  return scenario_sqrtcphase(theta, pc.gates, pc.state_reading);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  ReferenceConvention pc;
  unsigned threads;

  fs::path path(const std::string& name) const { return fs::path(cfg.out_dir) / name; }
  void write(const std::string& name, const std::string& content) const {
    io::write_atomic(path(name), content);
    out << "wrote " << path(name).string() << "\n";
  }
  std::string format(const char* fallback) const { return cfg.format.empty() ? fallback : cfg.format; }
};

JointPureState state_for(const Context& c, double theta) {
  return psi_theta(theta, c.pc.state_reading).with_system_slot(c.pc.gates.system_slot());
}

int cmd_sweep(const Context& c, const std::string& scenario) {
  const std::vector<double> thetas = c.cfg.thetas.empty() ? default_theta_grid() : c.cfg.thetas;
  std::vector<std::optional<ScenarioReport>> reports(thetas.size());
  parallel_for(thetas.size(), c.threads, [&](std::size_t i) {
    try {
      reports[i] = map_scenario(scenario, thetas[i], c.pc);
    } catch (const SingularMap&) {
    }
  });
  std::size_t singular = 0;
  if (c.format("csv") == "csv") {
    std::vector<io::SweepRow> rows;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      rows.push_back(reports[i] ? io::sweep_row(*reports[i]) : io::singular_row(thetas[i]));
      singular += reports[i] ? 0 : 1;
    }
    c.write(scenario + "_sweep.csv", io::sweep_csv(rows));
  } else {
    Json arr = Json::array();
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      if (reports[i]) {
        arr.push_back(io::to_json(*reports[i]));
      } else {
        ++singular;
        arr.push_back(Json{{"scenario_id", scenario}, {"theta", thetas[i]}, {"verdict", "SINGULAR"}});
      }
    }
    c.write(scenario + "_sweep.json", dump(arr));
  }
  c.out << thetas.size() << " points, " << singular << " singular\n";
  return kExitOk;
}

int cmd_spectrum(const Context& c, const std::string& scenario) {
  if (c.cfg.thetas.size() > 1) throw ConfigError("spectrum takes a single theta");
  const double theta = c.cfg.thetas.empty() ? (scenario == "sqrtcphase" ? kPi / 4 : kPi / 6) : c.cfg.thetas.front();
  const ScenarioReport r = map_scenario(scenario, theta, c.pc);
  c.write(scenario + "_spectrum.json", dump(io::to_json(r)));
  c.out << scenario << " theta=" << io::num(theta) << " verdict " << to_string(r.verdict) << " eigenvalues";
  for (double l : r.spectrum.eigenvalues) c.out << " " << io::num(l);
  c.out << "\n";
  return kExitOk;
}

int cmd_preinitial(const Context& c) {
  if (c.cfg.thetas.size() > 1) throw ConfigError("preinitial takes a single theta");
  const double theta = c.cfg.thetas.empty() ? kPi / 4 : c.cfg.thetas.front();
  const bool cphase = c.cfg.generator == "cphase";
  const ComplexMatrix h = cphase ? cphase_generator() : h_phi_generator();
  const JointPureState phi = psi_theta(theta, TensorOrder::ES);
  const PreInitialSearch s = search_pre_initial(phi, h, c.cfg.s_max, c.cfg.grid_n, c.cfg.tol);
  const auto profile = backward_entropy_profile(c.cfg.t_grid.empty() ? default_t_grid() : c.cfg.t_grid, h,
                                                cphase ? 1.0 : -2.0);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, worst = 0.0;
  for (const auto& p : profile) {
    lo = std::min(lo, p.entropy_bits);
    hi = std::max(hi, p.entropy_bits);
    worst = std::max(worst, p.residual);
  }
  Json j{{"theta", theta},
         {"generator", c.cfg.generator},
         {"search", io::to_json(s)},
         {"profile", Json{{"points", profile.size()},
                          {"entropy_min_bits", lo},
                          {"entropy_max_bits", hi},
                          {"max_residual", worst}}}};
  c.write("preinitial.json", dump(j));
  c.write("entropy_profile.csv", io::entropy_csv(profile));
  c.out << (s.s ? "pre-initial product at s=" + io::num(*s.s) : "no pre-initial product; min entropy " +
                                                                     io::num(s.min_entropy_bits) + " bits")
        << "\n";
  return kExitOk;
}

int cmd_mcfraction(const Context& c) {
  if (c.cfg.thetas.size() > 1) throw ConfigError("mcfraction takes a single theta");
  const double theta = c.cfg.thetas.empty() ? kPi / 6 : c.cfg.thetas.front();
  const McFraction m = mc_cp_fraction(state_for(c, theta), c.cfg.ensemble, c.cfg.n_samples, c.cfg.seed, c.threads);
  Json j{{"theta", theta},
         {"ensemble", std::string(to_string(c.cfg.ensemble))},
         {"n_samples", c.cfg.n_samples},
         {"seed", c.cfg.seed},
         {"result", io::to_json(m)}};
  c.write("mcfraction.json", dump(j));
  c.out << to_string(c.cfg.ensemble) << " CP fraction " << io::num(m.fraction) << " +- " << io::num(m.stderr_) << "\n";
  return kExitOk;
}

int cmd_augment(const Context& c) {
  if (c.cfg.thetas.size() > 1) throw ConfigError("augment takes a single theta");
  const double theta = c.cfg.thetas.empty() ? kPi / 6 : c.cfg.thetas.front();
  const ComplexMatrix u_se = named_gate(c.cfg.gate, c.pc.gates);
  if (u_se.rows() != 4) throw ConfigError("augment needs a two-qubit gate, got " + c.cfg.gate);
  const ComplexMatrix u_l = local_operator(single_qubit(c.cfg.local[0]), single_qubit(c.cfg.local[1]), c.pc.gates);
  const AugmentationResult a = augmentation_check(u_se, u_l, state_for(c, theta));
  Json j{{"theta", theta},
         {"gate", c.cfg.gate},
         {"local", Json::array({c.cfg.local[0], c.cfg.local[1]})},
         {"result", io::to_json(a)}};
  c.write("augment.json", dump(j));
  c.out << c.cfg.gate << " with " << c.cfg.local[0] << "(x)" << c.cfg.local[1] << ": locality "
        << (a.locality_preserved ? "preserved" : "lost") << ", " << to_string(a.verdict) << "\n";
  return kExitOk;
}

int cmd_dimratio(const Context& c) {
  const DimensionRatio r = dimension_ratio(c.cfg.d_s, c.cfg.d_e);
  Json scan = Json::array();
  for (int k = 1; k <= 10; ++k) {
    const int de = 1 << k;
    const DimensionRatio s = dimension_ratio(c.cfg.d_s, de);
    scan.push_back(Json{{"d_e", de}, {"exact", s.exact}, {"paper_approx", s.paper_approx},
                        {"paper_approx_over_limit", s.paper_approx / s.limit}});
  }
  Json j{{"d_s", c.cfg.d_s}, {"d_e", c.cfg.d_e}, {"ratio", io::to_json(r)}, {"scan", std::move(scan)}};
  c.write("dimratio.json", dump(j));
  c.out << "exact " << io::num(r.exact) << " approx " << io::num(r.paper_approx) << " limit " << io::num(r.limit) << "\n";
  return kExitOk;
}

int cmd_conventions(const Context& c) {
  const ConventionFit fit = convention_search(c.cfg.thetas.empty() ? default_theta_grid() : c.cfg.thetas, c.threads);
  c.write("conventions.json", dump(io::to_json(fit)));
  c.out << "winner " << to_string(fit.convention) << ", state reading " << to_string(fit.state_reading)
        << ", sup residual " << io::num(fit.sup_residual) << "\n";
  for (const auto& w : fit.warnings) c.out << "warning: " << w << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct Check {
  std::string id;
  std::string name;
  bool pass;
  Json detail;
};

int cmd_reproduce(const Context& c) {
  std::vector<Check> checks;
  Json sections = Json::object();

  const ConventionFit fit = convention_search(default_theta_grid(), c.threads);
  const ReferenceConvention pc = c.cfg.convention ? *c.cfg.convention : fit.reference();
  sections["conventions"] = io::to_json(fit);

  {
    double worst = 0.0;
    Json reports = Json::array();
    for (double theta : {kPi / 12, kPi / 6, kPi / 5}) {
      const ScenarioReport r = scenario_cnot_twice(theta, pc.gates);
      worst = std::max(worst, *r.residual_vs_paper);
      reports.push_back(io::to_json(r));
    }
    sections["cnot_twice"] = std::move(reports);
    checks.push_back({"1", "CNOT-twice A2/B2 and eigenvalues", worst <= 1e-10, Json{{"max_residual", worst}}});
  }
  {
    const auto grid = default_theta_grid();
    std::vector<io::SweepRow> rows(grid.size());
    parallel_for(grid.size(), c.threads, [&](std::size_t i) { rows[i] = io::sweep_row(scenario_sqrtcnot(grid[i], pc.gates)); });
    double worst = 0.0, min_minus = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      worst = std::max(worst, r.residual);
      min_minus = std::min(min_minus, r.lambda_minus);
    }
    c.write("sqrtcnot_sweep.csv", io::sweep_csv(rows));
    checks.push_back({"2", "sqrt-CNOT closed-form spectrum, always positive", worst <= 1e-8 && min_minus >= -1e-8,
                      Json{{"max_residual", worst}, {"min_lambda_minus", min_minus}}});
  }
  {
    const ScenarioReport r = scenario_sqrtcphase(kPi / 4, pc.gates, pc.state_reading);
    const auto ref = sqrtcphase_reference_spectrum();
    double worst = 0.0, sum = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      worst = std::max(worst, std::abs(r.spectrum.eigenvalues[k] - ref[k]));
      sum += r.spectrum.eigenvalues[k];
    }
    sections["sqrtcphase"] = io::to_json(r);
    checks.push_back({"3", "sqrt-CPHASE spectrum and NCP verdict",
                      worst <= 5e-4 && std::abs(sum - 2.0) <= 1e-9 && r.verdict == Verdict::NCP,
                      Json{{"max_eigenvalue_deviation", worst}, {"spectrum_sum", sum},
                           {"verdict", std::string(to_string(r.verdict))}}});
  }
  {
    const auto profile = backward_entropy_profile(default_t_grid());
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, worst = 0.0;
    for (const auto& p : profile) {
      lo = std::min(lo, p.entropy_bits);
      hi = std::max(hi, p.entropy_bits);
      worst = std::max(worst, p.residual);
    }
    const double printed = 0.25 * (5.0 - 2.0 * std::numbers::sqrt2 * std::atanh(1.0 / std::numbers::sqrt2));
    c.write("entropy_profile.csv", io::entropy_csv(profile));
    checks.push_back({"4", "backward C-Phase reduced state and constant entropy",
                      worst <= 1e-10 && hi - lo <= 1e-9 && std::abs(lo - 0.600876) <= 1e-6,
                      Json{{"max_residual", worst}, {"entropy_bits", lo}, {"entropy_spread", hi - lo},
                           {"entropy_nats", profile.front().entropy_nats}, {"printed_constant", printed}}});
  }
  {
    std::size_t conditioned = 0, cp = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 500; ++i) {
      const ProductCaseOutcome o = product_case_intermediate(random_product_case(c.cfg.seed, i));
      if (!o.cp) continue;
      ++conditioned;
      cp += o.cp->verdict == Verdict::CP ? 1 : 0;
      worst = std::min(worst, o.cp->min_eigenvalue);
    }
    checks.push_back({"5", "intermediate maps of product-state generators are CP", conditioned > 0 && cp == conditioned,
                      Json{{"cases", 500}, {"well_conditioned", conditioned}, {"cp", cp},
                           {"lowest_min_eigenvalue", worst}}});
  }
  {
    const JointPureState phi = psi_theta(kPi / 6, pc.state_reading).with_system_slot(pc.gates.system_slot());
    std::vector<ComplexMatrix> us;
    std::size_t cp = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < 50; ++i) {
      const ComplexMatrix v = kron(haar_unitary(2, c.cfg.seed ^ 0x5eedULL, 2 * i), haar_unitary(2, c.cfg.seed ^ 0x5eedULL, 2 * i + 1));
      const CpInducing u = cp_inducing_unitary(phi, v, 1.0);
      cp += u.cp.verdict == Verdict::CP ? 1 : 0;
      worst = std::min(worst, u.cp.min_eigenvalue);
      us.push_back(u.u2);
    }
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < us.size(); ++a)
      for (std::size_t b = a + 1; b < us.size(); ++b) min_dist = std::min(min_dist, (us[a] - us[b]).frobenius_norm());
    bool bell_rejected = false;
    try {
      const double r = 1.0 / std::numbers::sqrt2;
      cp_inducing_unitary(JointPureState({r, 0.0, 0.0, r}, 2, 2, Slot::first), ComplexMatrix::identity(4), 1.0);
    } catch (const MaximallyEntangled&) {
      bell_rejected = true;
    }
    checks.push_back({"6", "constructed unitaries distinct and CP-inducing; Bell rejected",
                      cp == us.size() && min_dist > 1e-6 && bell_rejected,
                      Json{{"samples", us.size()}, {"cp", cp}, {"lowest_min_eigenvalue", worst},
                           {"min_pairwise_distance", min_dist}, {"bell_rejected", bell_rejected}}});
  }
  {
    double max_cond = 0.0;
    Json conds = Json::array();
    for (double d : {1e-6, 1e-8, 1e-10, 1e-12}) {
      const double k = condition_number(cnot_twice_first_leg(kPi / 4 + d, pc.gates).matrix());
      max_cond = std::max(max_cond, k);
      conds.push_back(Json{{"offset", d}, {"condition_number", k}});
    }
    bool singular = false;
    try {
      scenario_cnot_twice(kPi / 4, pc.gates);
    } catch (const SingularMap&) {
      singular = true;
    }
    checks.push_back({"7", "CNOT-twice singularity at maximal entanglement", max_cond > 1e10 && singular,
                      Json{{"condition_numbers", std::move(conds)}, {"singular_at_quarter_pi", singular}}});
  }
  {
    const JointPureState phi = psi_theta(kPi / 6, pc.state_reading).with_system_slot(pc.gates.system_slot());
    const ComplexMatrix u_se = named_gate("SQRT_CNOT", pc.gates);
    struct Row {
      const char* control;
      const char* target;
      bool local;
      Verdict verdict;
    };
    const Row table[] = {{"Z", "X", true, Verdict::CP},
                         {"Z", "XROOT2", true, Verdict::CP},
                         {"Z", "XROOT3", true, Verdict::CP},
                         {"Z", "XROOT4", true, Verdict::CP},
                         {"X", "X", false, Verdict::NCP}};
    bool ok = true;
    Json rows = Json::array();
    for (const auto& row : table) {
      const auto a = augmentation_check(
          u_se, local_operator(single_qubit(row.control), single_qubit(row.target), pc.gates), phi);
      ok = ok && a.locality_preserved == row.local && a.verdict == row.verdict;
      Json j = io::to_json(a);
      j["local"] = std::string(row.control) + "(x)" + row.target;
      rows.push_back(std::move(j));
    }
    sections["augmentation"] = std::move(rows);
    checks.push_back({"8", "augmentation table under sqrt-CNOT", ok, Json::object()});
  }
  {
    const auto r22 = dimension_ratio(2, 2);
    const auto r2k = dimension_ratio(2, 1 << 10);
    const double dev = std::abs(r2k.paper_approx * 4.0 - 1.0);
    checks.push_back({"9", "dimension ratio", r22.paper_approx == 0.5 && dev < 1e-3 && std::abs(r22.exact - 0.4) < 1e-15,
                      Json{{"approx_2_2", r22.paper_approx}, {"exact_2_2", r22.exact}, {"approx_2_1024_times_4_minus_1", dev}}});
  }
  {
    const JointPureState phi = psi_theta(kPi / 6, pc.state_reading).with_system_slot(pc.gates.system_slot());
    const McFraction fam = mc_cp_fraction(phi, Ensemble::theorem_family, 200, c.cfg.seed, c.threads);
    const McFraction haar = mc_cp_fraction(phi, Ensemble::haar_full, 200, c.cfg.seed, c.threads);
    sections["mc_theorem_family"] = io::to_json(fam);
    sections["mc_haar_full"] = io::to_json(haar);
    checks.push_back({"10", "theorem-family CP fraction is 1 at n=200", fam.fraction == 1.0, io::to_json(fam)});
    checks.push_back({"10b", "Haar CP fraction strictly between 0 and 1", haar.fraction > 0.0 && haar.fraction < 1.0,
                      io::to_json(haar)});
  }

  Json table = Json::array();
  std::size_t passed = 0;
  for (const auto& ch : checks) {
    table.push_back(Json{{"id", ch.id}, {"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
    passed += ch.pass ? 1 : 0;
    c.out << (ch.pass ? "PASS " : "FAIL ") << ch.id << "  " << ch.name << "\n";
  }
  Json doc{{"seed", c.cfg.seed}, {"checks", std::move(table)}, {"sections", std::move(sections)}};
  c.write("reproduce_paper.json", dump(doc));
  c.out << passed << "/" << checks.size() << " checks pass\n";
  return kExitOk;
}

}  // namespace

ComplexMatrix single_qubit(std::string_view name) {
  if (name == "I") return ComplexMatrix::identity(2);
  if (name == "X" || name == "Y" || name == "Z") return pauli(name);
  for (const char* base : {"XROOT", "ZROOT"}) {
    const std::string_view b(base);
    if (name.substr(0, b.size()) == b && name.size() > b.size()) {
      const std::string digits(name.substr(b.size()));
      if (!std::all_of(digits.begin(), digits.end(), [](unsigned char ch) { return std::isdigit(ch); }) ||
          digits.size() > 3) {
        break;
      }
      const int n = std::stoi(digits);
      if (n < 1) break;
      return unitary_root(pauli(b.substr(0, 1)), n, RootBranch::principal);
    }
  }
  throw UnknownGate("unknown single-qubit operator '" + std::string(name) + "'");
}

unsigned threads_from_env() {
  const char* v = std::getenv("REDMAP_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const unsigned long n = std::strtoul(v, &end, 10);
  if (*end != '\0' || n > 1024) return 0;
  return static_cast<unsigned>(n);
}

RunConfig parse_config(std::string_view text_in) {
  Json j;
  try {
    j = Json::parse(text_in.begin(), text_in.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");

  RunConfig cfg;
  bool have_theta = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "scenario") {
      const std::string s = text(v, key);
      if (std::find(kScenarios.begin(), kScenarios.end(), s) == kScenarios.end()) {
        throw UnknownScenario("unknown scenario '" + s + "'");
      }
      cfg.scenario_id = s;
    } else if (key == "theta" || key == "theta_grid" || key == "theta_values") {
      if (have_theta) throw ConfigError("give only one of theta, theta_grid, theta_values");
      have_theta = true;
      if (key == "theta") {
        cfg.thetas = {finite_number(v, key)};
      } else if (key == "theta_grid") {
        cfg.thetas = linspace_spec(v, key);
      } else {
        if (!v.is_array() || v.empty()) throw ConfigError("'theta_values' must be a non-empty array");
        for (const auto& x : v) cfg.thetas.push_back(finite_number(x, key));
      }
    } else if (key == "t_grid") {
      cfg.t_grid = linspace_spec(v, key);
    } else if (key == "seed") {
      if (v.is_number_unsigned()) cfg.seed = v.get<std::uint64_t>();
      else if (v.is_number_integer() && v.get<std::int64_t>() >= 0) cfg.seed = static_cast<std::uint64_t>(v.get<std::int64_t>());
      else throw ConfigError("'seed' must be a non-negative integer");
    } else if (key == "ensemble") {
      cfg.ensemble = ensemble_from_string(text(v, key));
    } else if (key == "n_samples") {
      const std::int64_t n = integer(v, key);
      if (n < 1 || n > 100000000) throw ConfigError("'n_samples' out of range: " + std::to_string(n));
      cfg.n_samples = static_cast<std::size_t>(n);
    } else if (key == "convention") {
      cfg.convention = convention_from_json(v);
    } else if (key == "gate") {
      cfg.gate = text(v, key);
    } else if (key == "local") {
      if (!v.is_array() || v.size() != 2) throw ConfigError("'local' must be [on_control, on_target]");
      cfg.local = {text(v[0], key), text(v[1], key)};
    } else if (key == "generator") {
      cfg.generator = text(v, key);
      if (cfg.generator != "cphase" && cfg.generator != "h_phi") throw ConfigError("'generator' must be cphase|h_phi");
    } else if (key == "s_max") {
      cfg.s_max = finite_number(v, key);
      if (!(cfg.s_max > 0)) throw ConfigError("'s_max' must be positive");
    } else if (key == "grid_n") {
      const std::int64_t n = integer(v, key);
      if (n < 2 || n > 1000000) throw ConfigError("'grid_n' out of range");
      cfg.grid_n = static_cast<int>(n);
    } else if (key == "tol") {
      cfg.tol = finite_number(v, key);
      if (!(cfg.tol > 0)) throw ConfigError("'tol' must be positive");
    } else if (key == "d_s" || key == "d_e") {
      const std::int64_t n = integer(v, key);
      if (n < 2 || n > (1 << 20)) throw ConfigError("'" + key + "' out of range");
      (key == "d_s" ? cfg.d_s : cfg.d_e) = static_cast<int>(n);
    } else if (key == "out") {
      cfg.out_dir = text(v, key);
    } else if (key == "format") {
      cfg.format = text(v, key);
      if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("'format' must be csv|json");
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string scenario;
  try {
    if (std::find(kCommands.begin(), kCommands.end(), config.command) == kCommands.end()) {
      throw ConfigError("unknown command '" + config.command + "'");
    }
    if (!config.format.empty() && config.format != "csv" && config.format != "json") {
      throw ConfigError("--format must be csv|json");
    }
    const std::string_view fixed = scenario_for(config.command);
    if (fixed.empty()) {
      scenario = config.scenario_id.value_or(config.command == "sweep" ? "sqrtcnot" : "sqrtcphase");
      if (!is_map_scenario(scenario)) {
        throw ConfigError("command '" + config.command + "' needs scenario sqrtcnot, cnot_twice or sqrtcphase");
      }
    } else {
      scenario = std::string(fixed);
      if (config.scenario_id && *config.scenario_id != scenario) {
        throw ConfigError("scenario '" + *config.scenario_id + "' does not belong to command '" + config.command + "'");
      }
    }
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const unsigned threads = config.threads;
    const ReferenceConvention pc = config.convention ? *config.convention : reference_convention();
    const Context c{config, out, pc, threads};
    if (config.command == "sweep") return cmd_sweep(c, scenario);
    if (config.command == "spectrum") return cmd_spectrum(c, scenario);
    if (config.command == "preinitial") return cmd_preinitial(c);
    if (config.command == "mcfraction") return cmd_mcfraction(c);
    if (config.command == "augment") return cmd_augment(c);
    if (config.command == "dimratio") return cmd_dimratio(c);
    if (config.command == "conventions") return cmd_conventions(c);
    return cmd_reproduce(c);
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownGate& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SingularMap& e) {
    err << "scenario error (" << scenario << "): maximal-entanglement singularity: " << e.what() << "\n";
    return kExitScenario;
  } catch (const std::exception& e) {
    err << "scenario error (" << scenario << "): " << e.what() << "\n";
    return kExitScenario;
  }
}

}  // namespace redmap::cli
