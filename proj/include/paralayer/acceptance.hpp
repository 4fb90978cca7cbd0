#pragma once

#include <iosfwd>

namespace paralayer {

// Runs the ten release gates, streaming one "[ ok ]" / "[FAIL]" line per
// gate plus a summary; returns the number of failed gates. seed drives the
// random sampling of the identity gate.
int run_acceptance(std::ostream& out, unsigned long long seed = 42);

}  // namespace paralayer
