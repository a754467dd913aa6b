#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "redmap/dynamical_map.hpp"
#include "redmap/quantum_state.hpp"
#include "redmap/scenario_lab.hpp"
#include "redmap/tensor_core.hpp"

namespace redmap::io {

using Json = nlohmann::ordered_json;

/// printf("%.17g"); "nan" / "inf" / "-inf" for non-finite values.
std::string num(double x);

Json to_json(const ComplexMatrix& m);  // {rows, cols, re[][], im[][]}
ComplexMatrix matrix_from_json(const Json& j);

Json to_json(const JointPureState& psi);  // {d_first, d_second, system_slot, re[], im[]}
JointPureState state_from_json(const Json& j);

Json to_json(const AMatrix& a);  // {d_S, re[][], im[][]}
Json to_json(const ChoiMatrix& b);
AMatrix a_from_json(const Json& j);

Json to_json(const GateConvention& c);
Json to_json(const ScenarioReport& r);
Json to_json(const ConventionCandidate& c);
Json to_json(const ConventionFit& f);
Json to_json(const McFraction& m);
Json to_json(const AugmentationResult& a);
Json to_json(const DimensionRatio& d);
Json to_json(const PreInitialSearch& s);

struct SweepRow {
  double theta;
  double lambda_minus;
  double lambda_plus;
  Verdict verdict;
  double residual;
};

/// lambda_plus is the largest Choi eigenvalue; lambda_minus is the smallest one
/// when the map is NCP and otherwise the smaller of the two dominant ones.
SweepRow sweep_row(const ScenarioReport& r);
SweepRow singular_row(double theta);

inline constexpr const char* kSweepHeader = "theta,lambda_minus,lambda_plus,verdict,residual";
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

std::string entropy_csv(const std::vector<EntropyPoint>& points);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace redmap::io
