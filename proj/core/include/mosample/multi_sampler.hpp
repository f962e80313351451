#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mosample/single_sampler.hpp"

namespace mosample {

// One statistic with its own sample-size parameter.
struct Objective {
  StatFn f;
  int k = 1;

  friend bool operator==(const Objective&, const Objective&) = default;
};

struct MultiPpsSample {
  std::vector<Objective> objectives;
  RandSource rand;
  std::vector<double> totals;  // per-objective sum over the sampled data
  // Exact remainders of the totals, parallel to `totals` (inner lists are
  // usually empty). They keep merged totals bit-identical to one-shot ones;
  // probabilities read `totals` alone.
  std::vector<std::vector<double>> total_tails;
  std::vector<PoissonEntry> entries;  // sorted by key; p = max over objectives
  std::vector<std::string> warnings;  // e.g. objectives with empty support

  friend bool operator==(const MultiPpsSample&, const MultiPpsSample&) = default;
};

// max over objectives of min{1, k_f * f(key, w) / total_f}. Objectives whose
// total is zero contribute nothing.
double mo_pps_probability(const std::vector<Objective>& objectives,
                          const std::vector<double>& totals, const Key& key, double weight);

MultiPpsSample mo_pps_build(const Dataset& data, const std::vector<Objective>& objectives,
                            const RandSource& rand);

// Requires identical (objectives, rand) and disjoint key sets; totals add and
// every entry is refiltered against the recomputed probability.
MultiPpsSample mo_pps_merge(const MultiPpsSample& a, const MultiPpsSample& b);

// Sum over keys of max_f f(key, w) / total_f: the expected size of the
// union sample at k = 1 per objective. 1 for a single function, at most the
// number of functions.
double mo_pps_overhead(const Dataset& data, const std::vector<StatFn>& functions);

struct AuxKey {
  Key key;
  double weight = 0.0;
  double u = 0.0;

  friend bool operator==(const AuxKey&, const AuxKey&) = default;
};

// Union of coordinated bottom-k samples, one per objective. `aux` holds the
// per-objective boundary keys that fell outside the union; together with the
// entries they pin down every objective's threshold exactly, which is what
// makes the per-entry probabilities and merges exact. (Keeping only each
// entry's own best-objective boundary is not enough: a key can owe its
// probability to one objective while the max formula still consults the
// thresholds of all the others.)
struct MultiBotkSample {
  std::vector<Objective> objectives;
  RandSource rand;
  std::vector<PoissonEntry> entries;  // sorted by key; p = max of conditionals
  std::vector<AuxKey> aux;            // sorted by key, disjoint from entries
  std::vector<double> taus;           // per-objective (k_f+1)-smallest f-seed

  friend bool operator==(const MultiBotkSample&, const MultiBotkSample&) = default;
};

// One streaming pass; O(sum of k_f) state.
class MultiBotkBuilder {
 public:
  MultiBotkBuilder(std::vector<Objective> objectives, RandSource rand);

  void offer(const Element& e);
  MultiBotkSample finish() const;

 private:
  std::vector<Objective> objectives_;
  RandSource rand_;
  std::vector<BottomKBuilder> heaps_;
};

MultiBotkSample mo_botk_build(const Dataset& data, const std::vector<Objective>& objectives,
                              const RandSource& rand);

// Requires identical (objectives, rand). Exactly mo_botk_build on the union
// of the underlying datasets, auxiliary keys and probabilities included.
MultiBotkSample mo_botk_merge(const MultiBotkSample& a, const MultiBotkSample& b);

// Per-objective thresholds recomputed from the retained keys alone, per the
// definition: the (k_f+1)-smallest f-seed over entries and aux, +inf when
// there are fewer. Equal to what the build recorded; exposed so loaded
// samples can be cross-checked.
std::vector<double> mo_botk_recompute_taus(const MultiBotkSample& s);

struct OverheadEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

// Monte Carlo E|entries| / k over independent hash seeds; requires a uniform
// k across functions.
OverheadEstimate mo_botk_overhead(const Dataset& data, const std::vector<StatFn>& functions,
                                  int k, int trials, std::uint64_t base_seed, RankMode mode);

// Poisson sample from caller-supplied probability upper bounds: key x is
// kept iff u_x <= min{1, k * pi(x)}. When `base_p` is given, every pi is
// checked against it (pi >= base_p must hold for the estimates to stay
// unbiased).
struct UpperBoundSample {
  int k = 1;
  RandSource rand;
  std::vector<PoissonEntry> entries;  // p = min{1, k * pi}

  friend bool operator==(const UpperBoundSample&, const UpperBoundSample&) = default;
};

UpperBoundSample ub_build(const Dataset& data, const std::map<Key, double>& pi, int k,
                          const RandSource& rand, const std::map<Key, double>* base_p = nullptr);

}  // namespace mosample
