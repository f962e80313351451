#include "mosample/estimator.hpp"

#include "mosample/errors.hpp"

namespace mosample {

namespace {

struct Accumulator {
  double value = 0.0;
  int contributing = 0;

  void add(const Key& key, double weight, double p, const StatFn& g) {
    if (p <= 0.0) {
      throw DataError("sampled key '" + key + "' has zero probability; the sample is corrupt");
    }
    const double v = g.value(key, weight);
    if (v == 0.0) return;
    value += v / p;
    ++contributing;
  }
};

std::string gap_warning(const std::string& f_desc, const StatFn& g) {
  return "keys where " + f_desc + " is zero are never sampled but can carry positive " +
         g.spec() + "; the estimate omits them";
}

std::string unknown_warning(const std::string& f_desc, const StatFn& g) {
  return "cannot verify that " + f_desc + " is positive wherever " + g.spec() +
         " is; the estimate may omit keys";
}

void add_coverage_warning(const StatFn& f, const StatFn& g, EstimateResult& result) {
  switch (support_covers(f, g)) {
    case SupportCover::Covers:
      break;
    case SupportCover::Gap:
      result.warnings.push_back(gap_warning(f.spec(), g));
      break;
    case SupportCover::Unknown:
      result.warnings.push_back(unknown_warning(f.spec(), g));
      break;
  }
}

// A union sample misses a key only if every objective does.
void add_coverage_warning(const std::vector<Objective>& objectives, const StatFn& g,
                          EstimateResult& result) {
  bool unknown = false;
  for (const Objective& o : objectives) {
    switch (support_covers(o.f, g)) {
      case SupportCover::Covers:
        return;
      case SupportCover::Unknown:
        unknown = true;
        break;
      case SupportCover::Gap:
        break;
    }
  }
  const std::string desc = "every sampling objective";
  result.warnings.push_back(unknown ? unknown_warning(desc, g) : gap_warning(desc, g));
}

template <typename Entries>
void accumulate_stored(const Entries& entries, const StatFn& g, const Segment& segment,
                       Accumulator& acc) {
  for (const auto& e : entries) {
    if (segment.contains(e.key)) acc.add(e.key, e.weight, e.p, g);
  }
}

EstimateResult finish(Accumulator acc, const char* kind, EstimateResult result) {
  result.value = acc.value;
  result.contributing_keys = acc.contributing;
  result.sample_kind = kind;
  return result;
}

}  // namespace

EstimateResult estimate_segment_sum(const PoissonSample& s, const StatFn& g,
                                    const Segment& segment) {
  EstimateResult result;
  add_coverage_warning(s.f, g, result);
  Accumulator acc;
  accumulate_stored(s.entries, g, segment, acc);
  return finish(acc, "pps", std::move(result));
}

EstimateResult estimate_segment_sum(const BottomKSample& s, const StatFn& g,
                                    const Segment& segment) {
  EstimateResult result;
  add_coverage_warning(s.f, g, result);
  Accumulator acc;
  for (const BotkEntry& e : s.entries) {
    if (!segment.contains(e.key)) continue;
    acc.add(e.key, e.weight, botk_conditional_probability(s, e.key, e.weight), g);
  }
  return finish(acc, "botk", std::move(result));
}

EstimateResult estimate_segment_sum(const MultiPpsSample& s, const StatFn& g,
                                    const Segment& segment) {
  EstimateResult result;
  add_coverage_warning(s.objectives, g, result);
  Accumulator acc;
  accumulate_stored(s.entries, g, segment, acc);
  return finish(acc, "mo-pps", std::move(result));
}

EstimateResult estimate_segment_sum(const MultiBotkSample& s, const StatFn& g,
                                    const Segment& segment) {
  EstimateResult result;
  add_coverage_warning(s.objectives, g, result);
  Accumulator acc;
  accumulate_stored(s.entries, g, segment, acc);
  return finish(acc, "mo-botk", std::move(result));
}

EstimateResult estimate_segment_sum(const UniversalMonotoneSample& s, const StatFn& g,
                                    const Segment& segment) {
  // Every key in the sampled data weighs more than zero and can land in the
  // sample, so there is no support to miss.
  Accumulator acc;
  accumulate_stored(s.entries, g, segment, acc);
  return finish(acc, "universal-monotone", EstimateResult{});
}

EstimateResult estimate_segment_sum(const UniversalCappingSample& s, const StatFn& g,
                                    const Segment& segment) {
  Accumulator acc;
  accumulate_stored(s.entries, g, segment, acc);
  return finish(acc, "universal-capping", EstimateResult{});
}

EstimateResult estimate_with_upper_bounds(const UpperBoundSample& s, const StatFn& g,
                                          const Segment& segment) {
  Accumulator acc;
  accumulate_stored(s.entries, g, segment, acc);
  return finish(acc, "upper-bound", EstimateResult{});
}

SupportGap support_gap(const Dataset& data, const StatFn& sampling_f, const StatFn& g,
                       const Segment& segment) {
  const Dataset agg = data.aggregated ? data : aggregate(data);
  SupportGap gap;
  for (const Element& e : agg.elements) {
    if (!segment.contains(e.key)) continue;
    const double v = g.value(e.key, e.weight);
    if (v <= 0.0) continue;
    if (sampling_f.value(e.key, e.weight) <= 0.0) {
      ++gap.affected_keys;
      gap.missing_sum += v;
    }
  }
  return gap;
}

SupportGap support_gap(const Dataset& data, const std::vector<Objective>& objectives,
                       const StatFn& g, const Segment& segment) {
  const Dataset agg = data.aggregated ? data : aggregate(data);
  SupportGap gap;
  for (const Element& e : agg.elements) {
    if (!segment.contains(e.key)) continue;
    const double v = g.value(e.key, e.weight);
    if (v <= 0.0) continue;
    bool seen = false;
    for (const Objective& o : objectives) {
      if (o.f.value(e.key, e.weight) > 0.0) {
        seen = true;
        break;
      }
    }
    if (!seen) {
      ++gap.affected_keys;
      gap.missing_sum += v;
    }
  }
  return gap;
}

}  // namespace mosample
