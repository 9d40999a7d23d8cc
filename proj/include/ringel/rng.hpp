#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ringel {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Child stream keyed by a stage name, so that adding draws to one stage does
// not shift the randomness seen by another.
inline Rng stream(std::uint64_t root_seed, std::string_view name) {
  return Rng(splitmix64(root_seed ^ splitmix64(fnv1a(name))));
}

inline Rng stream(Rng& parent, std::string_view name) { return stream(parent(), name); }

inline bool coin(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Uniform integer in [0, n).
inline int uniform_index(Rng& rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform_index(rng, static_cast<int>(v.size())))];
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  std::shuffle(v.begin(), v.end(), rng);
}

// Uniform random k-subset of [0, n), sorted.
inline std::vector<int> random_subset(Rng& rng, int n, int k) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < k; ++i) {
    int j = i + uniform_index(rng, n - i);
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
  }
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace ringel
