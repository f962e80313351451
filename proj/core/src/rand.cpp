#include "mosample/rand.hpp"

#include "mosample/errors.hpp"

namespace mosample {

namespace {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

std::uint64_t keyed_hash(std::uint64_t seed, std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64_mix(h);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64_mix(base + 0x9e3779b97f4a7c15ULL * (index + 1));
}

std::string to_string(RankMode mode) {
  return mode == RankMode::Priority ? "priority" : "ppswor";
}

RankMode rank_mode_from_string(std::string_view s) {
  if (s == "priority") return RankMode::Priority;
  if (s == "ppswor") return RankMode::Ppswor;
  throw DataError("unknown rank mode: " + std::string(s));
}

}  // namespace mosample
