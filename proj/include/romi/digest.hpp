#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace romi {

// FNV-1a, 64-bit; chainable via the seed argument
inline uint64_t fnv64(const void* data, size_t len,
                      uint64_t seed = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t fnv64(std::string_view s, uint64_t seed = 0xcbf29ce484222325ull) {
  return fnv64(s.data(), s.size(), seed);
}

}  // namespace romi
