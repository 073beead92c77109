// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

namespace chargesense {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over a stream label.
constexpr std::uint64_t label_hash(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Counter-based generator: draw n is mix64(key + n * golden). Streams are keyed by
/// (root seed, replication, label), so adding a stream never shifts another one.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t root_seed, std::uint64_t replication, std::string_view label)
      : key_(mix64(mix64(root_seed) ^ mix64(replication + 0x632be59bd9b4e019ULL) ^ label_hash(label))) {}

  constexpr std::uint64_t next_u64() {
    const std::uint64_t out = mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
    ++counter_;
    return out;
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  constexpr double next_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace chargesense
