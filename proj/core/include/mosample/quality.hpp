#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mosample/dataset.hpp"
#include "mosample/stat_fn.hpp"

namespace mosample {

enum class SamplerKind { Pps, BotkPriority, BotkPpswor };

std::string to_string(SamplerKind kind);

// The sampling side of a Monte Carlo trial: which sampler to run, the
// objective it samples by, and its size parameter.
struct SamplerConfig {
  SamplerKind kind = SamplerKind::Pps;
  StatFn f;
  int k = 1;
};

// Accumulated result of a Monte Carlo trial suite. empirical_cv is the root
// mean squared relative deviation from the exact value, which for an
// unbiased estimator estimates the coefficient of variation (and slightly
// overestimates it otherwise, so bound checks stay conservative).
struct TrialReport {
  int trials = 0;
  double true_value = 0.0;
  double empirical_mean = 0.0;
  double empirical_cv = 0.0;
  double bound_cv = 0.0;
  std::map<double, int> exceedance_counts;  // delta -> trials with |err| > delta * true
  std::vector<std::string> notes;
};

// Variance guarantee for estimating sum(g; segment) from a sample taken for
// f: sqrt(disparity(f,g) / (q * k)), where q is the segment's share of the
// g-total. Bottom-k samplers get k-1 in place of k; with k = 1 the bound is
// infinite and the report notes it as vacuous.
double cv_bound(const Dataset& data, const SamplerConfig& config, const StatFn& g,
                const Segment& segment);

// Tail guarantee for the same estimate: the probability of relative error
// above delta is at most 2 exp(-q * k * delta^2 / (3 * disparity^2)), again
// with k-1 for bottom-k samplers.
double concentration_bound(const Dataset& data, const SamplerConfig& config, const StatFn& g,
                           const Segment& segment, double delta);

// Repeatedly draws a sample (varying only the hash seed), estimates
// sum(g; segment) by inverse probability, and reports the empirical CV next
// to cv_bound. trials must be >= 100 to be worth reporting.
TrialReport run_cv_trial(const Dataset& data, const SamplerConfig& config, const StatFn& g,
                         const Segment& segment, int trials, std::uint64_t base_seed);

// Same trial loop, tallying how often the relative error exceeds each delta;
// compare against concentration_bound. Deltas must be positive.
TrialReport run_concentration_trial(const Dataset& data, const SamplerConfig& config,
                                    const StatFn& g, const Segment& segment,
                                    const std::vector<double>& deltas, int trials,
                                    std::uint64_t base_seed);

// Per-objective versus simultaneous error of a shared sample. Keys are drawn
// independently with the multi-objective pps probabilities at size parameter
// ell; every objective's full-data sum is estimated from the same draw.
//   nmse_e = max over f of mean squared relative error   (each f on its own)
//   nmse_a = mean over draws of the worst objective's squared relative error
// nmse_e <= nmse_a holds by construction; the interesting question is by how
// much they differ, which is what the report exposes.
struct NmseReport {
  int trials = 0;
  double nmse_e = 0.0;
  double nmse_a = 0.0;
  std::vector<double> per_objective;  // mean squared relative error per family member
};

NmseReport run_nmse(const Dataset& data, const std::vector<StatFn>& family, int ell,
                    int trials, std::uint64_t base_seed);

// Exact verification that pps probabilities for nonnegative combinations of
// family members never exceed the shared multi-objective probabilities:
// min{1, k*f_x/sum(f)} <= max_g min{1, k*g_x/sum(g)} for every key, decided
// by cross-multiplication. Exact only when weights, table values, and
// coefficients are integers small enough that every product stays below
// 2^53, which the caller is responsible for.
struct ClosureReport {
  int combos_checked = 0;
  int keys_checked = 0;
  int violations = 0;
  bool ok() const { return violations == 0; }
};

ClosureReport check_closure(const Dataset& data, const std::vector<StatFn>& family,
                            const std::vector<std::vector<double>>& combo_coefficients,
                            int k);

// Reference answer for the weight-universal samplers on small data: the
// union of dedicated bottom-k samples over a statistic per distinct weight
// value (thresholds w >= T, or caps min(w, T)). Exponential in nothing but
// meant for n small enough that building one sample per distinct weight is
// acceptable.
enum class UnionFamily { Thresholds, Cappings };

std::set<Key> brute_force_union_oracle(const Dataset& data, UnionFamily family, int k,
                                       const RandSource& rand);

}  // namespace mosample
