#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mosample/dataset.hpp"
#include "mosample/rand.hpp"
#include "mosample/stat_fn.hpp"

namespace mosample {

// Outer objective M applied to candidate sums. The optimizer maximizes
// M(sum(f)) and its acceptance test divides by M values, so M must be
// nonnegative over every sum it meets; minimization is expressed as
// maximizing shift - v with a caller-chosen shift large enough to stay
// positive. `rate` is the declared relative rate of change
// (|M(v)-M(v')|/M(v) <= rate * |v-v'|/v), recorded for reporting; the
// algorithm itself only evaluates M.
struct OuterFn {
  std::function<double(double)> value;
  double rate = 1.0;
  std::string name = "identity";
};

OuterFn outer_identity();
OuterFn outer_negate_shift(double shift);

// Parses "identity" or "negate-shift:C". Throws DataError on anything else.
OuterFn parse_outer_fn(std::string_view spec);

// One sampled key as the inner solver sees it: the key, the weight stored in
// the dataset (what parametric statistics read), and the estimation weight
// a = m / min{1, k*pi} that makes sum(f; S, a) an unbiased estimate of
// sum(f; X, m).
struct SamplePoint {
  Key key;
  double weight = 0.0;
  double a = 0.0;
};

// Returns the index into `family` of a candidate whose M(sum(f; S, a)) is
// within the caller's approximation factor of the best over the family.
// An empty function means exhaustive evaluation (an exact maximizer).
using InnerSolver =
    std::function<int(const std::vector<SamplePoint>&, const std::vector<StatFn>&,
                      const OuterFn&)>;

enum class CertifyMode { Exact, ValidationSample };

struct OptimizationProblem {
  Dataset data;
  std::map<Key, double> importance;  // m_x >= 0; absent keys default to 1
  std::vector<StatFn> family;
  OuterFn M = outer_identity();
  double epsilon = 0.1;
  // Upper bounds on the base multi-objective sampling probabilities
  // max_f m_x f_x / sum(m f). Empty means: compute them exactly from the
  // data. Supplied bounds are validated against that base.
  std::map<Key, double> pi;
  RandSource rand;         // fixes the coordinated u_x across iterations
  InnerSolver solver;      // empty -> exhaustive
  CertifyMode certify = CertifyMode::Exact;
  std::uint64_t validation_seed = 1;
  // Acceptance test form: false compares M values (the default), true
  // compares the raw sums. They agree for the identity but differ for
  // shifted outer functions.
  bool test_on_sums = false;
};

struct IterationRecord {
  double k = 0.0;
  int sample_size = 0;
  int best_index = -1;
  double sample_sum = 0.0;       // sum(f; S, a) for the chosen candidate
  double sample_value = 0.0;     // M of it
  double reference_sum = 0.0;    // exact sum(f; X, m), or its validation estimate
  double reference_value = 0.0;  // M of it
  bool certified = false;
  // Bracket on the optimum reported when the test fails:
  // [reference_value, (1+eps) * sample_value].
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  // Tail bound 2*exp(-k*eps^2/3) on this iteration's estimate erring by a
  // relative eps, capped at 1.
  double failure_probability = 1.0;
};

struct OptimizeResult {
  int best_index = -1;
  double sample_sum = 0.0;
  double sample_value = 0.0;
  double reference_sum = 0.0;
  double reference_value = 0.0;
  int iterations = 0;
  double final_k = 0.0;
  std::vector<IterationRecord> history;
  std::vector<std::string> notes;
};

// The sample one iteration works with: every key whose coordinated u lies
// below min{1, k*pi}, carrying a = m / min{1, k*pi}. Doubling k only ever
// grows this set, since u is fixed and the probabilities are monotone in k.
std::vector<SamplePoint> optimization_sample(const OptimizationProblem& problem, double k);

struct CertifyOutcome {
  bool certified = false;
  double reference_sum = 0.0;
  double reference_value = 0.0;
};

// The acceptance test for one candidate: compares the (exact or
// independently re-estimated) value of sum(f; X, m) against the sample
// estimate, certifying when reference >= (1-eps) * estimate on the
// configured scale. `k` sizes the validation sample; `iteration` picks its
// fresh seed.
CertifyOutcome certify_candidate(const OptimizationProblem& problem, int f_index,
                                 double sample_sum, double k, int iteration);

// Adaptive-size optimization: starts at k = eps^-2, repeatedly solves over
// the current sample and doubles k until the chosen candidate certifies.
// Termination is guaranteed: once k*pi >= 1 everywhere the sample is the
// whole dataset and the test compares a value with itself.
OptimizeResult optimize(const OptimizationProblem& problem);

}  // namespace mosample
