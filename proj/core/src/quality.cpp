#include "mosample/quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mosample/errors.hpp"
#include "mosample/multi_sampler.hpp"
#include "mosample/single_sampler.hpp"

namespace mosample {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double effective_k(const SamplerConfig& config) {
  return config.kind == SamplerKind::Pps ? static_cast<double>(config.k)
                                         : static_cast<double>(config.k) - 1.0;
}

RankMode mode_for(const SamplerConfig& config) {
  return config.kind == SamplerKind::BotkPriority ? RankMode::Priority : RankMode::Ppswor;
}

// Share of the g-total carried by the segment.
double g_share(const Dataset& data, const StatFn& g, const Segment& segment) {
  const double total = segment_sum_exact(data, g, Segment::all());
  if (total <= 0.0) throw DataError("empty objective support (total is zero)");
  return segment_sum_exact(data, g, segment) / total;
}

double one_estimate(const Dataset& data, const SamplerConfig& config, const StatFn& g,
                    const Segment& segment, std::uint64_t seed) {
  const RandSource rand{seed, mode_for(config)};
  double est = 0.0;
  if (config.kind == SamplerKind::Pps) {
    const PoissonSample s = pps_build(data, config.f, config.k, rand);
    for (const PoissonEntry& e : s.entries) {
      if (segment.contains(e.key)) est += g.value(e.key, e.weight) / e.p;
    }
  } else {
    const BottomKSample s = botk_build(data, config.f, config.k, rand);
    for (const BotkEntry& e : s.entries) {
      if (!segment.contains(e.key)) continue;
      est += g.value(e.key, e.weight) / botk_conditional_probability(s, e.key, e.weight);
    }
  }
  return est;
}

double checked_truth(const Dataset& data, const StatFn& g, const Segment& segment) {
  const double truth = segment_sum_exact(data, g, segment);
  if (truth <= 0.0) throw DataError("segment sum is zero; relative error is undefined");
  return truth;
}

std::string format_delta(double delta) {
  std::ostringstream out;
  out << delta;
  return out.str();
}

}  // namespace

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::Pps: return "pps";
    case SamplerKind::BotkPriority: return "botk-priority";
    case SamplerKind::BotkPpswor: return "botk-ppswor";
  }
  return "unknown";
}

double cv_bound(const Dataset& data, const SamplerConfig& config, const StatFn& g,
                const Segment& segment) {
  const double rho = disparity(config.f, g, data);
  const double q = g_share(data, g, segment);
  return std::sqrt(rho / (q * effective_k(config)));
}

double concentration_bound(const Dataset& data, const SamplerConfig& config, const StatFn& g,
                           const Segment& segment, double delta) {
  if (delta <= 0.0) throw ContractError("delta must be positive");
  const double rho = disparity(config.f, g, data);
  const double q = g_share(data, g, segment);
  return 2.0 * std::exp(-(q * effective_k(config) * delta * delta) / (3.0 * rho * rho));
}

TrialReport run_cv_trial(const Dataset& data, const SamplerConfig& config, const StatFn& g,
                         const Segment& segment, int trials, std::uint64_t base_seed) {
  if (trials < 100) throw ContractError("cv trials must be >= 100 to estimate a CV");
  TrialReport report;
  report.trials = trials;
  report.true_value = checked_truth(data, g, segment);
  report.bound_cv = cv_bound(data, config, g, segment);

  double sum = 0.0;
  double sum_sq_rel = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double est = one_estimate(data, config, g, segment,
                                    derive_seed(base_seed, static_cast<std::uint64_t>(i)));
    sum += est;
    const double rel = est / report.true_value - 1.0;
    sum_sq_rel += rel * rel;
  }
  report.empirical_mean = sum / trials;
  report.empirical_cv = std::sqrt(sum_sq_rel / trials);
  if (!(report.bound_cv < kInf)) report.notes.push_back("vacuous bound (infinite)");
  return report;
}

TrialReport run_concentration_trial(const Dataset& data, const SamplerConfig& config,
                                    const StatFn& g, const Segment& segment,
                                    const std::vector<double>& deltas, int trials,
                                    std::uint64_t base_seed) {
  if (trials < 1) throw ContractError("trials must be >= 1");
  if (deltas.empty()) throw ContractError("no deltas given");
  TrialReport report;
  report.trials = trials;
  report.true_value = checked_truth(data, g, segment);
  report.bound_cv = cv_bound(data, config, g, segment);
  for (double delta : deltas) {
    const double bound = concentration_bound(data, config, g, segment, delta);
    report.exceedance_counts[delta] = 0;
    if (bound >= 1.0) {
      report.notes.push_back("vacuous bound (>= 1) at delta=" + format_delta(delta));
    }
  }

  double sum = 0.0;
  double sum_sq_rel = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double est = one_estimate(data, config, g, segment,
                                    derive_seed(base_seed, static_cast<std::uint64_t>(i)));
    sum += est;
    const double rel = std::abs(est / report.true_value - 1.0);
    sum_sq_rel += rel * rel;
    for (auto& [delta, count] : report.exceedance_counts) {
      if (rel > delta) ++count;
    }
  }
  report.empirical_mean = sum / trials;
  report.empirical_cv = std::sqrt(sum_sq_rel / trials);
  return report;
}

NmseReport run_nmse(const Dataset& data, const std::vector<StatFn>& family, int ell,
                    int trials, std::uint64_t base_seed) {
  if (family.empty()) throw DataError("no objectives given");
  if (ell < 1) throw ContractError("sample size parameter ell must be >= 1");
  if (trials < 1) throw ContractError("trials must be >= 1");
  const Dataset agg = data.aggregated ? data : aggregate(data);
  const std::size_t m = family.size();

  std::vector<double> totals(m, 0.0);
  for (const Element& e : agg.elements) {
    check_element(e);
    for (std::size_t j = 0; j < m; ++j) totals[j] += family[j].value(e.key, e.weight);
  }
  for (double t : totals) {
    if (t <= 0.0) throw DataError("empty objective support (total is zero)");
  }

  struct Included {
    Key key;
    double p = 0.0;
    std::vector<double> values;
  };
  std::vector<Included> keys;
  for (const Element& e : agg.elements) {
    Included x;
    x.key = e.key;
    x.values.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      x.values[j] = family[j].value(e.key, e.weight);
      x.p = std::max(x.p, std::min(1.0, ell * (x.values[j] / totals[j])));
    }
    if (x.p > 0.0) keys.push_back(std::move(x));
  }

  std::vector<double> acc(m, 0.0);
  double acc_worst = 0.0;
  std::vector<double> est(m);
  for (int i = 0; i < trials; ++i) {
    const RandSource rand{derive_seed(base_seed, static_cast<std::uint64_t>(i)),
                          RankMode::Ppswor};
    std::fill(est.begin(), est.end(), 0.0);
    for (const Included& x : keys) {
      if (rand.u(x.key) > x.p) continue;
      for (std::size_t j = 0; j < m; ++j) est[j] += x.values[j] / x.p;
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double rel = est[j] / totals[j] - 1.0;
      acc[j] += rel * rel;
      worst = std::max(worst, rel * rel);
    }
    acc_worst += worst;
  }

  NmseReport report;
  report.trials = trials;
  report.per_objective.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    report.per_objective[j] = acc[j] / trials;
    report.nmse_e = std::max(report.nmse_e, report.per_objective[j]);
  }
  report.nmse_a = acc_worst / trials;
  return report;
}

ClosureReport check_closure(const Dataset& data, const std::vector<StatFn>& family,
                            const std::vector<std::vector<double>>& combo_coefficients,
                            int k) {
  if (k < 1) throw ContractError("sample size parameter k must be >= 1");
  if (family.empty()) throw DataError("no objectives given");
  const Dataset agg = data.aggregated ? data : aggregate(data);
  const std::size_t m = family.size();
  const std::size_t n = agg.elements.size();

  std::vector<double> totals(m, 0.0);
  std::vector<std::vector<double>> values(m, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const Element& e = agg.elements[i];
    check_element(e);
    for (std::size_t j = 0; j < m; ++j) {
      values[j][i] = family[j].value(e.key, e.weight);
      totals[j] += values[j][i];
    }
  }
  for (double t : totals) {
    if (t <= 0.0) throw DataError("empty objective support (total is zero)");
  }

  ClosureReport report;
  for (const std::vector<double>& coeffs : combo_coefficients) {
    if (coeffs.size() != m) {
      throw ContractError("combo coefficient count does not match the family size");
    }
    double combo_total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (coeffs[j] < 0.0) throw DataError("negative combination coefficient");
      combo_total += coeffs[j] * totals[j];
    }
    if (combo_total <= 0.0) throw DataError("empty objective support (total is zero)");

    for (std::size_t i = 0; i < n; ++i) {
      double combo_value = 0.0;
      for (std::size_t j = 0; j < m; ++j) combo_value += coeffs[j] * values[j][i];

      // Compare min{1, k*combo/combo_total} against
      // max_j min{1, k*values[j]/totals[j]} without forming any quotient.
      bool rhs_at_one = false;
      for (std::size_t j = 0; j < m && !rhs_at_one; ++j) {
        rhs_at_one = k * values[j][i] >= totals[j];
      }
      bool ok = rhs_at_one;
      if (!ok && k * combo_value < combo_total) {
        for (std::size_t j = 0; j < m && !ok; ++j) {
          ok = combo_value * totals[j] <= values[j][i] * combo_total;
        }
      }
      ++report.keys_checked;
      if (!ok) ++report.violations;
    }
    ++report.combos_checked;
  }
  return report;
}

std::set<Key> brute_force_union_oracle(const Dataset& data, UnionFamily family, int k,
                                       const RandSource& rand) {
  const Dataset agg = data.aggregated ? data : aggregate(data);
  std::set<double> thresholds;
  for (const Element& e : agg.elements) {
    if (e.weight <= 0.0) {
      throw DataError("key '" + e.key +
                      "' has non-positive weight; weight-universal samples "
                      "require positive weights");
    }
    thresholds.insert(e.weight);
  }

  std::set<Key> members;
  for (double t : thresholds) {
    const StatFn f =
        family == UnionFamily::Thresholds ? StatFn::threshold(t) : StatFn::cap(t);
    const BottomKSample s = botk_build(agg, f, k, rand);
    for (const BotkEntry& e : s.entries) members.insert(e.key);
  }
  return members;
}

}  // namespace mosample
