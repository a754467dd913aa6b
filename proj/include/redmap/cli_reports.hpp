#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "redmap/scenario_lab.hpp"
#include "redmap/unitary_factory.hpp"

namespace redmap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitScenario = 2;

/// Subcommand names, in help order.
inline constexpr std::array<std::string_view, 8> kCommands{"sweep",     "spectrum", "preinitial", "mcfraction",
                                                           "augment",   "dimratio", "conventions", "reproduce-paper"};

/// Accepted values of the "scenario" key.
inline constexpr std::array<std::string_view, 9> kScenarios{"sqrtcnot", "cnot_twice", "sqrtcphase",
                                                            "preinitial", "mc",         "augment",
                                                            "dimratio",  "conventions", "reproduce"};

struct RunConfig {
  std::string command;                    // one of kCommands; set by the front end
  std::optional<std::string> scenario_id;  // one of kScenarios
  std::vector<double> thetas;             // empty: command default
  std::vector<double> t_grid;             // empty: 64 points on [0, 2 pi]
  std::optional<ReferenceConvention> convention;  // empty: convention_search winner
  std::string gate = "SQRT_CNOT";
  std::array<std::string, 2> local{"Z", "X"};  // on control, on target
  std::string generator = "cphase";            // cphase | h_phi
  std::uint64_t seed = 0;
  Ensemble ensemble = Ensemble::theorem_family;
  std::size_t n_samples = 200;
  double s_max = 6.283185307179586;
  int grid_n = 256;
  double tol = 1e-9;
  int d_s = 2;
  int d_e = 2;
  std::string out_dir = ".";
  std::string format;  // csv | json; empty: command default
  unsigned threads = 0;
};

/// Strict JSON: unknown keys, wrong types and out-of-range values raise
/// ConfigError; an unknown scenario raises UnknownScenario.
RunConfig parse_config(std::string_view text);

/// Single-qubit operator by name: I, X, Y, Z, or XROOT<n> / ZROOT<n> for the principal n-th root.
ComplexMatrix single_qubit(std::string_view name);

/// REDMAP_THREADS, 0 when unset or unparsable.
unsigned threads_from_env();

/// Executes config.command, writing files under config.out_dir and a short
/// summary to `out`. Returns kExitOk, kExitUsage or kExitScenario.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace redmap::cli
