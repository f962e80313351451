#pragma once

#include <optional>
#include <vector>

#include "mosample/dataset.hpp"
#include "mosample/stat_fn.hpp"

namespace mosample {

struct PoissonEntry {
  Key key;
  double weight = 0.0;
  double u = 0.0;
  double p = 0.0;

  friend bool operator==(const PoissonEntry&, const PoissonEntry&) = default;
};

// Independent per-key sample: key x is kept iff u_x <= min{1, k f_x / total}.
struct PoissonSample {
  StatFn f;
  int k = 1;
  RandSource rand;
  double total = 0.0;  // sum of f over the sampled data, correctly rounded
  // Exact remainder of that sum (nonempty only when the f-values do not sum
  // exactly in double). Carrying it makes merged totals identical to one-shot
  // totals bit for bit; probabilities read `total` alone.
  std::vector<double> total_tail;
  std::vector<PoissonEntry> entries;  // sorted by key

  friend bool operator==(const PoissonSample&, const PoissonSample&) = default;
};

// min{1, k * f_value / total}. A zero total means f has empty support and no
// probability is defined; callers that permit it (multi-objective) must
// filter before calling.
double pps_probability(double f_value, int k, double total);

PoissonSample pps_build(const Dataset& data, const StatFn& f, int k, const RandSource& rand);

// Requires identical (f, k, rand) and disjoint key sets. The result is
// exactly pps_build on the concatenated data.
PoissonSample pps_merge(const PoissonSample& a, const PoissonSample& b);

struct BotkEntry {
  Key key;
  double weight = 0.0;
  double u = 0.0;
  double seed = 0.0;

  friend bool operator==(const BotkEntry&, const BotkEntry&) = default;
};

// The k keys with smallest f-seeds r_x / f_x. `boundary` is the key holding
// the (k+1)-st smallest seed; its seed is tau, the conditioning threshold
// for inclusion probabilities. Keeping the boundary as a full record (not
// just the scalar tau) is what makes merges exact when a key appears in
// several shards with different weights.
struct BottomKSample {
  StatFn f;
  int k = 1;
  RandSource rand;
  std::vector<BotkEntry> entries;  // ascending (seed, key), at most k
  std::optional<BotkEntry> boundary;

  double tau() const;

  friend bool operator==(const BottomKSample&, const BottomKSample&) = default;
};

// Streaming builder: O(k) state, one pass, repeated keys keep their maximum
// weight whether or not the earlier occurrence was still retained.
class BottomKBuilder {
 public:
  BottomKBuilder(StatFn f, int k, RandSource rand);

  void offer(const Element& e);
  BottomKSample finish() const;

 private:
  struct Node {
    BotkEntry entry;
  };
  bool heap_less(std::size_t a, std::size_t b) const;
  void sift_up(std::size_t i);
  void sift_down(std::size_t i);

  StatFn f_;
  int k_;
  RandSource rand_;
  std::vector<BotkEntry> heap_;  // max-heap by (seed, key), size <= k+1
  std::map<Key, std::size_t> slot_;
};

BottomKSample botk_build(const Dataset& data, const StatFn& f, int k, const RandSource& rand);

// Requires identical (f, k, rand). Repeated keys keep the largest weight.
// The result is exactly botk_build on the union of the underlying datasets.
BottomKSample botk_merge(const BottomKSample& a, const BottomKSample& b);

// Conditional inclusion probability of a key with statistic value f_value
// given threshold tau:
//   priority:  min{1, f_value * tau}
//   ppswor:    1 - exp(-f_value * tau)
// tau = +inf (fewer than k+1 positive keys) gives probability 1.
double conditional_inclusion(RankMode mode, double f_value, double tau);

double botk_conditional_probability(const BottomKSample& s, const Key& key, double w);

}  // namespace mosample
