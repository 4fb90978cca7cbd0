#pragma once

#include <string>
#include <vector>

#include "paralayer/asymptotics.hpp"

namespace paralayer {

inline constexpr const char* kToolName = "paralayer";
inline constexpr const char* kToolVersion = "0.1.0";

// Run record dropped next to every output set. wall_ms is the only field
// allowed to differ between identical runs; the CSV tables carry the
// byte-identity guarantee.
struct Manifest {
  std::string subcommand;
  std::string status;       // ok | config-error | numerical-error | acceptance-failed
  long long wall_ms = 0;
  std::string message;      // diagnostic for failure paths, empty otherwise
  std::string config_echo;  // canonical key = value lines
};

std::string render_manifest(const Manifest& m);

// writes dir/manifest.txt
void write_manifest(const std::string& dir, const Manifest& m);

// Standalone SVG of the counting-function ratios against log10(E), with the
// admissible band shaded and the ratio = 1 guide dashed.
std::string render_ratio_svg(const std::vector<RatioRow<double>>& rows, double band_lo,
                             double band_hi);

}  // namespace paralayer
