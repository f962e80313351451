#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mosample/dataset.hpp"
#include "mosample/multi_sampler.hpp"
#include "mosample/single_sampler.hpp"

namespace mosample {

// One sample serving every monotone non-decreasing statistic of the weight.
// A key is an entry iff fewer than k keys of weight >= its own drew a
// smaller u, which makes the entry set the union of the bottom-k threshold
// samples over all cutoff values. `aux` keys are not sampled themselves but
// pin down the inclusion probability of entries sharing their weight.
// `weight_probability` maps each entry weight w to p(w): the probability
// that a key of weight w is an entry, given the other keys' draws. The same
// membership and probabilities hold under both rank modes, so the sample is
// mode-independent.
struct UniversalMonotoneSample {
  int k = 1;
  RandSource rand;
  std::vector<PoissonEntry> entries;  // sorted by key; p = weight_probability at the entry weight
  std::vector<AuxKey> aux;            // sorted by key, disjoint from entries
  std::map<double, double> weight_probability;
  std::int64_t n_processed = 0;

  friend bool operator==(const UniversalMonotoneSample&,
                         const UniversalMonotoneSample&) = default;
};

// Largest single-draw (k = 1) inclusion probability of `key` across all
// monotone statistics: 1 / |{y : w_y >= w_key}|. Requires aggregated data
// with positive weights; the key must be present.
double monotone_base_probability(const Dataset& data, const Key& key);

// Builds the sample by scanning keys in decreasing-weight order (ties:
// increasing u, then key bytes). Duplicate keys are aggregated to their
// maximum weight first; weights must be positive.
UniversalMonotoneSample universal_monotone_by_weight(const Dataset& data, int k,
                                                     const RandSource& rand);

// Identical output to universal_monotone_by_weight, computed by scanning
// keys in increasing-u order instead. The two builds cross-check each other.
UniversalMonotoneSample universal_monotone_by_u(const Dataset& data, int k,
                                                const RandSource& rand);

// Recomputes an entry's inclusion probability from the retained records:
// 1 when fewer than k+1 retained keys have weight >= the entry's, otherwise
// the (k+1)-st smallest u among them. Equals the stored p. The key must be
// an entry.
double monotone_conditional_probability(const UniversalMonotoneSample& s, const Key& key);

// Requires identical (k, rand). The result is exactly a build over the
// union of the underlying datasets (repeated keys keep the largest weight);
// retaining aux keys is what makes this rebuild lossless. n_processed is
// summed, which counts overlapping keys once per side.
UniversalMonotoneSample universal_monotone_merge(const UniversalMonotoneSample& a,
                                                 const UniversalMonotoneSample& b);

// Per-key competition counts for the capping-universal sample:
//   h = keys with weight >= this key's weight and smaller u
//   l = strictly lighter keys with smaller weight-normalized rank r/w
// A key is sampled iff h + l < k.
struct CappingEntry {
  Key key;
  double weight = 0.0;
  double u = 0.0;
  int h = 0;
  int l = 0;
  double p = 0.0;

  friend bool operator==(const CappingEntry&, const CappingEntry&) = default;
};

// Boundary key: h + l == k. Not sampled, but retained for two reasons: it
// may realize the threshold that prices a sampled key (`needed`), and the
// full boundary layer is what keeps merge-by-rebuild exact.
struct CappingAux {
  Key key;
  double weight = 0.0;
  double u = 0.0;
  int h = 0;
  int l = 0;
  bool needed = false;

  friend bool operator==(const CappingAux&, const CappingAux&) = default;
};

// One sample serving min(w, T) statistics for every cap T simultaneously.
// Always a subset of the monotone-universal entries under the same draw,
// and unlike them its expected size does not grow with the number of keys,
// only with the spread of the weights.
struct UniversalCappingSample {
  int k = 1;
  RandSource rand;
  std::vector<CappingEntry> entries;  // sorted by key
  std::vector<CappingAux> aux;        // sorted by key, disjoint from entries

  friend bool operator==(const UniversalCappingSample&,
                         const UniversalCappingSample&) = default;
};

// Three passes: a descending-weight scan computing h, an ascending-weight
// scan computing l over the h <= k survivors, and a pricing pass that gives
// each sampled key the conditional inclusion probability of a bottom-k
// sample capped at its own weight. Requires aggregated data and positive
// weights.
UniversalCappingSample universal_capping_build(const Dataset& data, int k,
                                               const RandSource& rand);

// Requires identical (k, rand). The result is exactly a build over the
// union of the underlying datasets (repeated keys keep the largest weight).
UniversalCappingSample universal_capping_merge(const UniversalCappingSample& a,
                                               const UniversalCappingSample& b);

}  // namespace mosample
