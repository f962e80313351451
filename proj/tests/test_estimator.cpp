#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mosample/errors.hpp"
#include "mosample/estimator.hpp"

using namespace mosample;

namespace {

// Mean and variance of a sampler's segment-sum estimates over fresh seeds.
template <typename BuildAndEstimate>
std::pair<double, double> trial_stats(int trials, std::uint64_t base_seed,
                                      BuildAndEstimate run) {
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double est = run(derive_seed(base_seed, static_cast<std::uint64_t>(i)));
    sum += est;
    sum_sq += est * est;
  }
  const double mean = sum / trials;
  return {mean, sum_sq / trials - mean * mean};
}

void check_unbiased(double mean, double variance, int trials, double truth) {
  const double se = std::sqrt(variance / trials);
  CHECK(std::abs(mean - truth) <= 3.0 * se + 1e-9);
}

}  // namespace

TEST_CASE("one sampled key divides its value by its probability") {
  PoissonSample s;
  s.f = StatFn::sum();
  s.k = 1;
  s.total = 14.0;
  s.entries = {{"a", 7.0, 0.25, 0.5}};
  const EstimateResult r = estimate_segment_sum(s, StatFn::sum(), Segment::all());
  CHECK(r.value == 14.0);
  CHECK(r.contributing_keys == 1);
  CHECK(r.sample_kind == "pps");
  CHECK(r.warnings.empty());
}

TEST_CASE("a sample holding everything at probability one reproduces exact sums") {
  const Dataset ten = fixtures::ten_keys();
  const RandSource rand{17, RankMode::Ppswor};
  const PoissonSample s = pps_build(ten, StatFn::sum(), 1000, rand);
  REQUIRE(s.entries.size() == 10);
  const Segment h = fixtures::segment_h();

  CHECK(estimate_segment_sum(s, StatFn::sum(), h).value == 128.0);
  CHECK(estimate_segment_sum(s, StatFn::count(), h).value == 4.0);
  CHECK(estimate_segment_sum(s, StatFn::threshold(10.0), h).value == 2.0);
  CHECK(estimate_segment_sum(s, StatFn::cap(5.0), h).value == 17.0);
  CHECK(estimate_segment_sum(s, StatFn::moment(2.0), h).value == 10414.0);
  CHECK(estimate_segment_sum(s, StatFn::sum(), Segment::all()).value == 385.0);

  const EstimateResult count = estimate_segment_sum(s, StatFn::count(), h);
  CHECK(count.contributing_keys == 4);
}

TEST_CASE("an empty intersection estimates zero") {
  const PoissonSample s =
      pps_build(fixtures::ten_keys(), StatFn::sum(), 3, RandSource{17, RankMode::Ppswor});
  const EstimateResult r =
      estimate_segment_sum(s, StatFn::sum(), Segment::keys({"absent"}));
  CHECK(r.value == 0.0);
  CHECK(r.contributing_keys == 0);
}

TEST_CASE("pps estimates of a different statistic are unbiased") {
  const Dataset ten = fixtures::ten_keys();
  const Segment h = fixtures::segment_h();
  const int trials = 10000;
  const auto [mean, variance] = trial_stats(trials, 8100, [&](std::uint64_t seed) {
    const PoissonSample s =
        pps_build(ten, StatFn::sum(), 3, RandSource{seed, RankMode::Ppswor});
    return estimate_segment_sum(s, StatFn::threshold(10.0), h).value;
  });
  check_unbiased(mean, variance, trials, 2.0);
}

TEST_CASE("bottom-k estimates are unbiased in both rank modes") {
  const Dataset ten = fixtures::ten_keys();
  for (RankMode mode : {RankMode::Ppswor, RankMode::Priority}) {
    const int trials = 10000;
    const auto [mean, variance] = trial_stats(trials, 8200, [&](std::uint64_t seed) {
      const BottomKSample s = botk_build(ten, StatFn::sum(), 5, RandSource{seed, mode});
      return estimate_segment_sum(s, StatFn::sum(), Segment::all()).value;
    });
    check_unbiased(mean, variance, trials, 385.0);
  }
}

TEST_CASE("shared multi-objective samples estimate each objective without bias") {
  const Dataset ten = fixtures::ten_keys();
  const std::vector<Objective> objectives{{StatFn::sum(), 3}, {StatFn::count(), 2}};
  const Segment h = fixtures::segment_h();
  const int trials = 10000;

  const auto [mean_pps, var_pps] = trial_stats(trials, 8300, [&](std::uint64_t seed) {
    const MultiPpsSample s = mo_pps_build(ten, objectives, RandSource{seed, RankMode::Ppswor});
    return estimate_segment_sum(s, StatFn::count(), h).value;
  });
  check_unbiased(mean_pps, var_pps, trials, 4.0);

  const auto [mean_bk, var_bk] = trial_stats(trials, 8301, [&](std::uint64_t seed) {
    const MultiBotkSample s = mo_botk_build(ten, objectives, RandSource{seed, RankMode::Ppswor});
    return estimate_segment_sum(s, StatFn::sum(), h).value;
  });
  check_unbiased(mean_bk, var_bk, trials, 128.0);

  const MultiPpsSample s = mo_pps_build(ten, objectives, RandSource{1, RankMode::Ppswor});
  CHECK(estimate_segment_sum(s, StatFn::sum(), h).sample_kind == "mo-pps");
  CHECK(estimate_segment_sum(s, StatFn::sum(), h).warnings.empty());
}

TEST_CASE("universal samples estimate weight statistics without bias") {
  const Dataset ten = fixtures::ten_keys();
  const Segment h = fixtures::segment_h();
  const int trials = 10000;

  const auto [mean_m, var_m] = trial_stats(trials, 8400, [&](std::uint64_t seed) {
    const UniversalMonotoneSample s =
        universal_monotone_by_weight(ten, 4, RandSource{seed, RankMode::Ppswor});
    return estimate_segment_sum(s, StatFn::cap(5.0), h).value;
  });
  check_unbiased(mean_m, var_m, trials, 17.0);

  const auto [mean_c, var_c] = trial_stats(trials, 8401, [&](std::uint64_t seed) {
    const UniversalCappingSample s =
        universal_capping_build(aggregate(ten), 4, RandSource{seed, RankMode::Priority});
    return estimate_segment_sum(s, StatFn::cap(5.0), h).value;
  });
  check_unbiased(mean_c, var_c, trials, 17.0);

  const UniversalMonotoneSample s =
      universal_monotone_by_weight(ten, 4, RandSource{1, RankMode::Ppswor});
  CHECK(estimate_segment_sum(s, StatFn::sum(), h).sample_kind == "universal-monotone");
}

TEST_CASE("upper-bound samples stay unbiased and doubling bounds cuts variance") {
  const Dataset ten = fixtures::ten_keys();
  const double total = 385.0;
  std::map<Key, double> base, doubled;
  for (const Element& e : ten.elements) {
    base[e.key] = e.weight / total;
    doubled[e.key] = std::min(1.0, 2.0 * e.weight / total);
  }
  const int k = 3;
  const int trials = 10000;

  const auto [mean_base, var_base] = trial_stats(trials, 8500, [&](std::uint64_t seed) {
    const UpperBoundSample s =
        ub_build(ten, base, k, RandSource{seed, RankMode::Ppswor}, &base);
    return estimate_with_upper_bounds(s, StatFn::sum(), Segment::all()).value;
  });
  const auto [mean_db, var_db] = trial_stats(trials, 8501, [&](std::uint64_t seed) {
    const UpperBoundSample s =
        ub_build(ten, doubled, k, RandSource{seed, RankMode::Ppswor}, &base);
    return estimate_with_upper_bounds(s, StatFn::sum(), Segment::all()).value;
  });
  check_unbiased(mean_base, var_base, trials, total);
  check_unbiased(mean_db, var_db, trials, total);
  CHECK(var_db <= 0.55 * var_base);

  // Bounds of one make every draw exact.
  std::map<Key, double> ones;
  for (const Element& e : ten.elements) ones[e.key] = 1.0;
  const UpperBoundSample s = ub_build(ten, ones, k, RandSource{3, RankMode::Ppswor}, &base);
  const EstimateResult r = estimate_with_upper_bounds(s, StatFn::sum(), Segment::all());
  CHECK(r.value == total);
  CHECK(r.sample_kind == "upper-bound");

  // A bound below the base probability is a contract breach at build time.
  std::map<Key, double> low = base;
  low["u31"] = base["u31"] / 2.0;
  CHECK_THROWS_AS(ub_build(ten, low, k, RandSource{3, RankMode::Ppswor}, &base),
                  ContractError);
}

TEST_CASE("estimates are linear in the statistic") {
  // Dyadic weights and probabilities make the identity exact in floating
  // point, not just algebraically.
  Dataset d;
  d.elements = {{"a", 4.0}, {"b", 2.0}, {"c", 1.0}, {"d", 1.0}};
  const StatFn combo = StatFn::combo({{0.5, StatFn::sum()}, {2.0, StatFn::count()}});
  for (int t = 0; t < 40; ++t) {
    const RandSource rand{derive_seed(8600, static_cast<std::uint64_t>(t)), RankMode::Ppswor};
    const PoissonSample s = pps_build(d, StatFn::sum(), 2, rand);
    const double lhs = estimate_segment_sum(s, combo, Segment::all()).value;
    const double rhs = 0.5 * estimate_segment_sum(s, StatFn::sum(), Segment::all()).value +
                       2.0 * estimate_segment_sum(s, StatFn::count(), Segment::all()).value;
    CHECK(lhs == rhs);
  }

  // On arbitrary weights the identity holds to rounding.
  const Dataset ten = fixtures::ten_keys();
  for (int t = 0; t < 40; ++t) {
    const RandSource rand{derive_seed(8601, static_cast<std::uint64_t>(t)), RankMode::Priority};
    const BottomKSample s = botk_build(ten, StatFn::sum(), 4, rand);
    const double lhs = estimate_segment_sum(s, combo, fixtures::segment_h()).value;
    const double rhs =
        0.5 * estimate_segment_sum(s, StatFn::sum(), fixtures::segment_h()).value +
        2.0 * estimate_segment_sum(s, StatFn::count(), fixtures::segment_h()).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("coverage warnings flag statistics the sampling objective can miss") {
  const Dataset ten = fixtures::ten_keys();
  const RandSource rand{17, RankMode::Ppswor};

  // Sampling by a threshold leaves every lighter key unreachable.
  const PoissonSample narrow = pps_build(ten, StatFn::threshold(10.0), 3, rand);
  const EstimateResult biased = estimate_segment_sum(narrow, StatFn::sum(), Segment::all());
  REQUIRE(biased.warnings.size() == 1);
  CHECK(biased.warnings[0].find("never sampled") != std::string::npos);

  // The other direction is safe and stays quiet.
  const PoissonSample wide = pps_build(ten, StatFn::sum(), 3, rand);
  CHECK(estimate_segment_sum(wide, StatFn::threshold(10.0), Segment::all()).warnings.empty());

  // Key-table statistics cannot be cleared from shapes alone.
  const EstimateResult unknown =
      estimate_segment_sum(wide, StatFn::table({{"u3", 1.0}}), Segment::all());
  REQUIRE(unknown.warnings.size() == 1);
  CHECK(unknown.warnings[0].find("cannot verify") != std::string::npos);

  // A union sample warns only when no objective covers the statistic.
  const std::vector<Objective> covered{{StatFn::threshold(10.0), 2}, {StatFn::sum(), 2}};
  const std::vector<Objective> gappy{{StatFn::threshold(10.0), 2}, {StatFn::threshold(5.0), 2}};
  const MultiPpsSample mc = mo_pps_build(ten, covered, rand);
  const MultiPpsSample mg = mo_pps_build(ten, gappy, rand);
  CHECK(estimate_segment_sum(mc, StatFn::sum(), Segment::all()).warnings.empty());
  CHECK(estimate_segment_sum(mg, StatFn::sum(), Segment::all()).warnings.size() == 1);
}

TEST_CASE("support gaps are counted exactly against the source data") {
  const Dataset ten = fixtures::ten_keys();
  const SupportGap gap =
      support_gap(ten, StatFn::threshold(10.0), StatFn::sum(), Segment::all());
  CHECK(gap.affected_keys == 6);
  CHECK(gap.missing_sum == 23.0);

  const SupportGap none = support_gap(ten, StatFn::sum(), StatFn::sum(), Segment::all());
  CHECK(none.affected_keys == 0);
  CHECK(none.missing_sum == 0.0);

  const SupportGap segment_only =
      support_gap(ten, StatFn::threshold(10.0), StatFn::sum(), fixtures::segment_h());
  CHECK(segment_only.affected_keys == 2);  // u12 and u55
  CHECK(segment_only.missing_sum == 9.0);

  const std::vector<Objective> family{{StatFn::threshold(10.0), 2}, {StatFn::cap(5.0), 2}};
  const SupportGap covered = support_gap(ten, family, StatFn::sum(), Segment::all());
  CHECK(covered.affected_keys == 0);
}

TEST_CASE("a sampled key with zero probability is rejected as corrupt") {
  PoissonSample s;
  s.f = StatFn::sum();
  s.k = 1;
  s.total = 10.0;
  s.entries = {{"a", 7.0, 0.25, 0.0}, {"b", 3.0, 0.5, 1.0}};
  CHECK_THROWS_AS(estimate_segment_sum(s, StatFn::sum(), Segment::all()), DataError);
  // Keys outside the segment are never consulted.
  CHECK(estimate_segment_sum(s, StatFn::sum(), Segment::keys({"b"})).value == 3.0);
}
