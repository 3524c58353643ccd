#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "afem/dln.hpp"
#include "afem/scheme.hpp"

namespace afem {

enum class Experiment { project_convergence, time_convergence, space_convergence, self_organization, adaptive_compare };

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

struct RunConfig {
  Experiment experiment = Experiment::time_convergence;
  bool full_scale = false;
  double theta = 0.3;
  std::vector<int> n_list;
  std::vector<double> dt_list;
  double T = 1;
  ModelParams params;
  std::vector<double> re_list;
  std::uint64_t seed = 1;
  double delta = 2;
  StepBounds bounds;
  double constant_dt = 1e-4;
  std::vector<double> snapshot_times;
  std::string out_dir = "afem_out";
  int workers = 1;

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

/// Defaults of an experiment at desk or full scale.
RunConfig default_config(Experiment e, bool full_scale);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help / --version; carries the text to print.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command line over environment (AFEM_*) over a key=value file (--config)
/// over experiment defaults.
RunConfig parse_config(int argc, const char* const* argv);

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace afem
