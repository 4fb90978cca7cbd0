#pragma once

namespace paralayer {

// Full command-line front end. Returns the process exit code: 0 success,
// 1 failed verification, 2 malformed configuration, 3 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace paralayer
