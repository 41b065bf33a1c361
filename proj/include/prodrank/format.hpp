#pragma once

#include <string>

namespace prodrank {

// Shortest decimal string that round-trips the double. Keeps every emitted
// file byte-stable across runs and platforms.
std::string format_double(double value);

}  // namespace prodrank
