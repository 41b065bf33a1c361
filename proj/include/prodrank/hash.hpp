#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace prodrank {

// FNV-1a, 64-bit. Used for config hashes and corpus digests in report
// headers; not cryptographic.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string to_hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

inline std::string fnv1a64_hex(std::string_view data) {
  return to_hex64(fnv1a64(data));
}

}  // namespace prodrank
