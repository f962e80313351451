#pragma once

#include <string>
#include <vector>

#include "mosample/multi_sampler.hpp"
#include "mosample/single_sampler.hpp"
#include "mosample/stat_fn.hpp"
#include "mosample/universal_sampler.hpp"

namespace mosample {

// Inverse-probability estimate of sum(g; segment) from one sample: the sum
// of g(x)/p_x over sampled keys in the segment. Auxiliary keys carried by a
// sample are bookkeeping, not support, and never contribute.
struct EstimateResult {
  double value = 0.0;
  int contributing_keys = 0;  // sampled segment keys with a nonzero g-value
  std::string sample_kind;
  std::vector<std::string> warnings;

  friend bool operator==(const EstimateResult&, const EstimateResult&) = default;
};

// The estimate is unbiased when every key with a positive g-value had a
// positive sampling probability. Where that cannot be established from the
// sampling objective's shape, the result carries a warning; a sampled
// segment key whose recorded probability is zero or negative raises
// DataError, since no well-formed build produces one.
EstimateResult estimate_segment_sum(const PoissonSample& s, const StatFn& g,
                                    const Segment& segment);
EstimateResult estimate_segment_sum(const BottomKSample& s, const StatFn& g,
                                    const Segment& segment);
EstimateResult estimate_segment_sum(const MultiPpsSample& s, const StatFn& g,
                                    const Segment& segment);
EstimateResult estimate_segment_sum(const MultiBotkSample& s, const StatFn& g,
                                    const Segment& segment);
EstimateResult estimate_segment_sum(const UniversalMonotoneSample& s, const StatFn& g,
                                    const Segment& segment);
EstimateResult estimate_segment_sum(const UniversalCappingSample& s, const StatFn& g,
                                    const Segment& segment);

// Same estimator over a sample drawn from probability upper bounds. The
// recorded p is min{1, k*pi}; dividing by it keeps the estimate unbiased
// whenever the bounds really dominated the base probabilities, which
// ub_build enforces at sampling time.
EstimateResult estimate_with_upper_bounds(const UpperBoundSample& s, const StatFn& g,
                                          const Segment& segment);

// Exact accounting of the coverage warning, for callers that still hold the
// data a sample came from: the segment keys that carry positive g but had
// zero sampling probability, and the g-mass the estimate therefore misses.
struct SupportGap {
  int affected_keys = 0;
  double missing_sum = 0.0;
};

SupportGap support_gap(const Dataset& data, const StatFn& sampling_f, const StatFn& g,
                       const Segment& segment);
SupportGap support_gap(const Dataset& data, const std::vector<Objective>& objectives,
                       const StatFn& g, const Segment& segment);

}  // namespace mosample
