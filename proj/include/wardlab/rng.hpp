#ifndef WARDLAB_RNG_HPP
#define WARDLAB_RNG_HPP

#include <cstdint>
#include <string_view>

namespace wardlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic sub-seed: all randomness flows from one master seed, with
/// per-component seeds derived by hashing a fixed label.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(master ^ h);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label, int index) {
  return splitmix64(derive_seed(master, label) + static_cast<std::uint64_t>(index));
}

}  // namespace wardlab

#endif  // WARDLAB_RNG_HPP
