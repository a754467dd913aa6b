#include "redmap/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "redmap/errors.hpp"

namespace redmap::io {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const ComplexMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ri = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

namespace {

ComplexMatrix matrix_from_parts(const Json& re, const Json& im) {
  const std::size_t rows = re.size();
  if (rows == 0 || im.size() != rows) throw ConfigError("matrix: re/im row counts differ or are zero");
  const std::size_t cols = re.at(0).size();
  std::vector<cplx> e;
  e.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (re.at(r).size() != cols || im.at(r).size() != cols) throw ConfigError("matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) e.emplace_back(re[r][c].get<double>(), im[r][c].get<double>());
  }
  return ComplexMatrix(rows, cols, std::move(e));
}

Json real_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json verdict_json(Verdict v) { return std::string(to_string(v)); }

}  // namespace

ComplexMatrix matrix_from_json(const Json& j) { return matrix_from_parts(j.at("re"), j.at("im")); }

Json to_json(const JointPureState& psi) {
  Json re = Json::array(), im = Json::array();
  for (const cplx& a : psi.amplitudes()) {
    re.push_back(a.real());
    im.push_back(a.imag());
  }
  return Json{{"d_first", psi.d_first()},
              {"d_second", psi.d_second()},
              {"system_slot", std::string(to_string(psi.system_slot()))},
              {"re", std::move(re)},
              {"im", std::move(im)}};
}

JointPureState state_from_json(const Json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != im.size()) throw ConfigError("state: re/im lengths differ");
  CVector a;
  for (std::size_t k = 0; k < re.size(); ++k) a.emplace_back(re[k].get<double>(), im[k].get<double>());
  const std::string slot = j.at("system_slot").get<std::string>();
  if (slot != "first" && slot != "second") throw ConfigError("state: system_slot must be first or second");
  return JointPureState(std::move(a), j.at("d_first").get<std::size_t>(), j.at("d_second").get<std::size_t>(),
                        slot == "first" ? Slot::first : Slot::second);
}

Json to_json(const AMatrix& a) {
  Json m = to_json(a.matrix());
  return Json{{"d_S", a.d_s()}, {"re", m["re"]}, {"im", m["im"]}};
}

Json to_json(const ChoiMatrix& b) {
  Json m = to_json(b.matrix());
  return Json{{"d_S", b.d_s()}, {"re", m["re"]}, {"im", m["im"]}};
}

AMatrix a_from_json(const Json& j) {
  return AMatrix(matrix_from_parts(j.at("re"), j.at("im")), j.at("d_S").get<std::size_t>());
}

Json to_json(const GateConvention& c) {
  return Json{{"control_slot", std::string(to_string(c.control_slot))},
              {"root_branch", std::string(to_string(c.root_branch))},
              {"tensor_order", std::string(to_string(c.tensor_order))}};
}

Json to_json(const ScenarioReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  Json mats = Json::object();
  for (const auto& [k, m] : r.matrices) mats[k] = to_json(m);
  Json notes = Json::array();
  for (const auto& n : r.notes) notes.push_back(n);
  return Json{{"scenario_id", r.scenario_id},
              {"convention", to_json(r.convention)},
              {"parameters", std::move(params)},
              {"matrices", std::move(mats)},
              {"spectrum", Json{{"eigenvalues", real_array(r.spectrum.eigenvalues)}}},
              {"verdict", verdict_json(r.verdict)},
              {"residual_vs_paper", r.residual_vs_paper ? Json(*r.residual_vs_paper) : Json(nullptr)},
              {"notes", std::move(notes)}};
}

Json to_json(const ConventionCandidate& c) {
  return Json{{"convention", to_json(c.convention)},
              {"state_reading", std::string(to_string(c.state_reading))},
              {"cnot_twice_residual", c.eq3_residual},
              {"sqrtcnot_residual", c.eq2_residual},
              {"pre_initial_residual", c.pre_initial_residual},
              {"product_identity_residual", c.identity_residual}};
}

Json to_json(const ConventionFit& f) {
  Json cands = Json::array();
  for (const auto& c : f.candidates) cands.push_back(to_json(c));
  Json warnings = Json::array();
  for (const auto& w : f.warnings) warnings.push_back(w);
  return Json{{"convention", to_json(f.convention)},
              {"state_reading", std::string(to_string(f.state_reading))},
              {"sup_residual", f.sup_residual},
              {"best", to_json(f.best)},
              {"candidates", std::move(cands)},
              {"warnings", std::move(warnings)}};
}

Json to_json(const McFraction& m) {
  return Json{{"fraction", m.fraction},
              {"stderr", m.stderr_},
              {"n_cp", m.n_cp},
              {"n_ncp", m.n_ncp},
              {"n_singular", m.n_singular}};
}

Json to_json(const AugmentationResult& a) {
  return Json{{"locality_preserved", a.locality_preserved},
              {"conjugated_schmidt_ratio", a.conjugated_schmidt_ratio},
              {"verdict", verdict_json(a.verdict)},
              {"min_eigenvalue", a.min_eigenvalue},
              {"base_verdict", verdict_json(a.base_verdict)}};
}

Json to_json(const DimensionRatio& d) {
  return Json{{"exact", d.exact}, {"paper_approx", d.paper_approx}, {"limit", d.limit}};
}

Json to_json(const PreInitialSearch& s) {
  return Json{{"found", s.s.has_value()},
              {"s", s.s ? Json(*s.s) : Json(nullptr)},
              {"min_entropy_bits", s.min_entropy_bits},
              {"s_at_min", s.s_at_min}};
}

SweepRow sweep_row(const ScenarioReport& r) {
  const auto& ev = r.spectrum.eigenvalues;
  std::vector<double> by_mag = ev;
  std::sort(by_mag.begin(), by_mag.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  const double lo = r.verdict == Verdict::NCP ? ev.front() : std::min(by_mag[0], by_mag[1]);
  return {r.parameter("theta"), lo, ev.back(), r.verdict,
          r.residual_vs_paper.value_or(std::numeric_limits<double>::quiet_NaN())};
}

SweepRow singular_row(double theta) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {theta, nan, nan, Verdict::SINGULAR, nan};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepHeader) + "\n";
  for (const auto& r : rows) {
    out += num(r.theta) + "," + num(r.lambda_minus) + "," + num(r.lambda_plus) + "," +
           std::string(to_string(r.verdict)) + "," + num(r.residual) + "\n";
  }
  return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) throw ConfigError("sweep csv: bad header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 5) throw ConfigError("sweep csv: expected 5 fields in '" + line + "'");
    Verdict v;
    if (f[3] == "CP") v = Verdict::CP;
    else if (f[3] == "NCP") v = Verdict::NCP;
    else if (f[3] == "SINGULAR") v = Verdict::SINGULAR;
    else throw ConfigError("sweep csv: unknown verdict '" + f[3] + "'");
    rows.push_back({std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), v, std::stod(f[4])});
  }
  return rows;
}

std::string entropy_csv(const std::vector<EntropyPoint>& points) {
  std::string out = "t,rho00,rho01_re,rho01_im,rho11,entropy_bits,entropy_nats,residual\n";
  for (const auto& p : points) {
    const auto& m = p.reduced_state;
    out += num(p.t) + "," + num(m(0, 0).real()) + "," + num(m(0, 1).real()) + "," + num(m(0, 1).imag()) + "," +
           num(m(1, 1).real()) + "," + num(p.entropy_bits) + "," + num(p.entropy_nats) + "," + num(p.residual) + "\n";
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move " + tmp.string() + " to " + path.string());
  }
}

}  // namespace redmap::io
