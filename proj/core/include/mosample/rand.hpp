#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace mosample {

using Key = std::string;

// Rank transform applied to a key's uniform draw u.
//   Priority: r = u            (priority / sequential Poisson sampling)
//   Ppswor:   r = -ln(1 - u)   (exponential rank; pps without replacement)
enum class RankMode { Priority, Ppswor };

std::string to_string(RankMode mode);
RankMode rank_mode_from_string(std::string_view s);

// Identifier of the keyed hash recorded in sample files. Samples are only
// mergeable/reproducible when produced by the same hash function.
inline constexpr const char* kHashId = "fnv1a64-sm";

// Seeded 64-bit hash of a byte string: FNV-1a with the seed xored into the
// offset basis, finished with the SplitMix64 mixer. Stable across platforms.
std::uint64_t keyed_hash(std::uint64_t seed, std::string_view bytes);

// Maps a 64-bit hash to a uniform double in the open interval (0,1):
// u = ((h >> 12) + 0.5) * 2^-52. Every step is exact in binary64, so the
// range is exactly [2^-53, 1 - 2^-53]; u is never 0 and never 1, which keeps
// -ln(1-u) finite and positive.
inline double unit_uniform(std::uint64_t h) {
  return (static_cast<double>(h >> 12) + 0.5) * 0x1p-52;
}

// The per-key randomness shared by every sample drawn from one logical
// "coin flip" over the data: u(key) is a function of (hash_seed, key) only,
// which is what makes samples for different objectives coordinated and
// makes merges of shards consistent.
struct RandSource {
  std::uint64_t hash_seed = 0;
  RankMode mode = RankMode::Ppswor;

  double u(const Key& key) const { return unit_uniform(keyed_hash(hash_seed, key)); }

  // Rank of a uniform draw under this source's mode. Strictly increasing in
  // u, strictly positive.
  double rank(double u_value) const {
    return mode == RankMode::Priority ? u_value : -std::log1p(-u_value);
  }

  double rank_of_key(const Key& key) const { return rank(u(key)); }

  friend bool operator==(const RandSource&, const RandSource&) = default;
};

// f-seed of a key: rank / f(w). Keys with f(w) == 0 get seed +inf and can
// never enter a bottom-k sample for f.
inline double f_seed(double rank, double f_value) {
  if (f_value <= 0.0) return std::numeric_limits<double>::infinity();
  return rank / f_value;
}

// Deterministic seed sequence for repeated trials: trial i reuses the key
// hash with a distinct derived seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace mosample
