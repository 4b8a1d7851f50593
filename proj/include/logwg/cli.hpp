#ifndef LOGWG_CLI_HPP
#define LOGWG_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "logwg/evolve.hpp"
#include "logwg/gradflow.hpp"
#include "logwg/propcheck.hpp"

namespace logwg {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kManifestFormat = "logwg-manifest/1";

enum ExitStatus : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2, kExitProperty = 3 };

/// Every recognised key with its default; an empty default means unset.
const std::vector<std::pair<std::string, std::string>>& config_keys();

/// Fully validated configuration. `echo` holds every key after defaults,
/// file values and overrides were applied.
struct RunConfig {
  std::map<std::string, std::string> echo;
  std::filesystem::path out;
  std::uint64_t seed = 1;

  GridSpec grid;
  Real theta = 1.0;
  FlowConfig flow;
  std::string init_file;

  Real mu_min_exp = -2.0;
  Real mu_max_exp = 3.0;
  int mu_count = 13;
  bool warm_start = true;
  bool cold_check = true;

  EvolveConfig evolve;
  std::string evolve_init = "groundstate";
  Real pert = 1e-3;
  std::uint64_t pert_seed = 7;
  int snapshot_every = 0;

  int a_count = 20;
  Real eps_moll = 1e-2;
  Real ell = 1.0;
  Real r_min = 0.05;
  Real r_max = 5.0;
  int r_count = 50;

  std::string suite = "all";
  int samples = 20;
  Real alpha = 1.0;
  long split_samples = 1000000;
  EnsembleKind ensemble = EnsembleKind::BandLimited;
};

/// Throws ConfigError or DomainError on unknown keys, malformed values or
/// out-of-range parameters.
RunConfig parse_run_config(const std::map<std::string, std::string>& raw);

/// Mass of the configured sphere from `theta`, `mass` or `lambda_target`
/// (reduced Gausson multiplier); at most one may be set.
Real resolve_theta(const std::map<std::string, std::string>& values, int d, int n);

/// Entry point: `logwg <subcommand> [--config FILE] [--set key=value]...`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, char** argv);

} // namespace logwg

#endif // LOGWG_CLI_HPP
