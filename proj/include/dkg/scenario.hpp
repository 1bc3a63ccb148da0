#pragma once

// Scenario files: one JSON document configures the grid, the Cauchy data,
// masses, the weight sigma0, run horizon and step, probe schedule, seed,
// and the per-subcommand sections. Parsing is strict: unknown keys and
// out-of-range values fail with the offending field path in the message.

#include <cstdint>
#include <string>
#include <vector>

#include "dkg/generators.hpp"
#include "dkg/picard.hpp"
#include "dkg/state.hpp"

namespace dkg {

inline constexpr const char* kScenarioSchema = "dkg.scenario.v1";

// One field of the Cauchy data: either a closed-form generator profile or
// a seeded random band-limited draw.
struct DataSpec {
  enum class Source { generator, random };
  Source source = Source::generator;
  GeneratorSpec gen;
  // random source
  int band_max_mode = 0;
  double decay = 0.25;
  bool real_symmetric = false;
};

struct ChecksConfig {
  std::vector<double> sigmas{0.0, 0.3};
  std::vector<double> horizons{1.0, 10.0, 100.0};
  int random_draws = 100;
  double pass_constant = 2.0;
};

struct CertifyConfig {
  // When set, certificate inputs come from these numbers instead of being
  // measured from the data (the arithmetic-only mode).
  bool explicit_inputs = false;
  double m0 = 0.0;
  double n0 = 0.0;
  bool verify = true;
  int probes = 16;
  double sigma_override = 0.0;
};

struct Scenario {
  std::string name = "unnamed";
  double half_length_over_pi = 64.0;
  int modes = 8192;
  Masses masses;
  double sigma0 = 0.5;
  double horizon = 10.0;
  double dt = 1e-3;
  double probe_interval = 0.0;  // 0: endpoints only
  std::uint64_t seed = 0;
  DataSpec psi_p, psi_m, phi0, phi1;
  bool has_constants = false;
  CalibratedConstants consts;
  std::vector<double> t_list;  // radius subcommand targets
  ChecksConfig checks;
  CertifyConfig certify;
};

// Parses and validates; throws ValidationError with "<field path>: reason".
Scenario scenario_from_json_text(const std::string& text);
Scenario load_scenario(const std::string& path);

double scenario_half_length(const Scenario& s);
GridPtr scenario_grid(const Scenario& s);

// Realizes the four data fields on the grid (random draws use the scenario
// seed, offset per slot so the fields are independent).
CauchyData scenario_data(const Scenario& s, const GridPtr& grid);

}  // namespace dkg
