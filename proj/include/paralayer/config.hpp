#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "paralayer/profile.hpp"

namespace paralayer {

// malformed or out-of-range run description; callers map this to exit code 2
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value run description. The defaults reproduce the alpha = 2,
// k = 1, a = 0.3 reference layer the test suite is calibrated against.
struct RunConfig {
  double alpha = 2.0;
  double k = 1.0;
  double R = 0.0;                    // cap radius, pure_power requires R = 0
  std::string cap = "pure_power";    // pure_power | quintic_blend
  double a = 0.3;                    // layer half-width
  double p = 20.0;                   // tail cut position
  double s_max = 30.0;               // meridian strip length for 2D commands
  double h = 0.05;                   // 1D mesh spacing
  long long n = 4000;                // arc-length table nodes
  long long n_s = 240;               // strip nodes along s
  long long n_u = 40;                // strip nodes across u
  long long m_max = 12;              // highest angular mode reported
  unsigned long long seed = 42;      // property-test sampling seed
  std::vector<double> E_list{1e-2, 1e-3, 1e-4};
  std::string output_dir = "paralayer_out";
};

// Parses "key = value" lines; '#' starts a comment, blank lines are skipped,
// later assignments win. Unknown keys and unparsable values throw ConfigError.
RunConfig parse_config_text(const std::string& text);

// applies one "key=value" assignment on top of an existing config
void apply_override(RunConfig& cfg, const std::string& assignment);

// range checks; throws ConfigError with the offending key in the message
void validate(const RunConfig& cfg);

// canonical listing in declaration order, one "key = value" line each
std::string config_echo(const RunConfig& cfg);

LayerProfile<double> make_profile(const RunConfig& cfg);

}  // namespace paralayer
