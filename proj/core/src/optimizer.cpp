#include "mosample/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "mosample/errors.hpp"

namespace mosample {

namespace {

std::string format_value(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

struct Prepared {
  std::vector<Element> keys;  // aggregated, sorted by key
  std::vector<double> m;
  std::vector<double> pi;
  std::vector<double> totals;  // exact sum(m f) per candidate
};

Prepared prepare(const OptimizationProblem& problem) {
  if (!(problem.epsilon > 0.0 && problem.epsilon < 1.0)) {
    throw ContractError("epsilon must be in (0, 1)");
  }
  if (problem.family.empty()) throw DataError("no candidate objectives");
  if (!problem.M.value) throw ContractError("no outer function given");

  Prepared prep;
  prep.keys = (problem.data.aggregated ? problem.data : aggregate(problem.data)).elements;
  const std::size_t n = prep.keys.size();
  prep.m.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    check_element(prep.keys[i]);
    const auto it = problem.importance.find(prep.keys[i].key);
    const double m = it == problem.importance.end() ? 1.0 : it->second;
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw DataError("negative importance weight for key '" + prep.keys[i].key + "'");
    }
    prep.m[i] = m;
  }

  prep.totals.assign(problem.family.size(), 0.0);
  for (std::size_t j = 0; j < problem.family.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = problem.family[j].value(prep.keys[i].key, prep.keys[i].weight);
      if (!(v >= 0.0)) {
        throw DataError("candidate objective is negative on key '" + prep.keys[i].key + "'");
      }
      prep.totals[j] += prep.m[i] * v;
    }
    if (prep.totals[j] <= 0.0) throw DataError("empty objective support (total is zero)");
  }

  prep.pi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double base = 0.0;
    for (std::size_t j = 0; j < problem.family.size(); ++j) {
      const double v = problem.family[j].value(prep.keys[i].key, prep.keys[i].weight);
      base = std::max(base, prep.m[i] * v / prep.totals[j]);
    }
    if (problem.pi.empty()) {
      prep.pi[i] = base;
      continue;
    }
    const auto it = problem.pi.find(prep.keys[i].key);
    if (base <= 0.0) {
      // Massless keys never matter; a bound is welcome but not required.
      prep.pi[i] = it == problem.pi.end() ? 0.0 : it->second;
      continue;
    }
    if (it == problem.pi.end()) {
      throw DataError("no probability bound for key '" + prep.keys[i].key + "'");
    }
    const double bound = it->second;
    if (!(bound > 0.0) || bound > 1.0 || !std::isfinite(bound)) {
      throw DataError("probability bound for key '" + prep.keys[i].key + "' outside (0, 1]");
    }
    if (bound < base) {
      throw ContractError("probability bound for key '" + prep.keys[i].key +
                          "' is below its base sampling probability");
    }
    prep.pi[i] = bound;
  }
  return prep;
}

struct BuiltSample {
  std::vector<SamplePoint> points;
  bool full_data = true;  // every positive-mass key included at probability 1
};

BuiltSample build_points(const Prepared& prep, const RandSource& rand, double k) {
  BuiltSample built;
  for (std::size_t i = 0; i < prep.keys.size(); ++i) {
    if (prep.pi[i] <= 0.0) continue;
    const double p = std::min(1.0, k * prep.pi[i]);
    if (p < 1.0) built.full_data = false;
    if (rand.u(prep.keys[i].key) <= p) {
      built.points.push_back({prep.keys[i].key, prep.keys[i].weight, prep.m[i] / p});
    }
  }
  return built;
}

double checked_outer(const OuterFn& M, double sum) {
  const double v = M.value(sum);
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ContractError("outer function must stay finite and nonnegative over the "
                        "encountered sums; increase the shift");
  }
  return v;
}

double sample_candidate_sum(const std::vector<SamplePoint>& points, const StatFn& f) {
  double sum = 0.0;
  for (const SamplePoint& pt : points) sum += f.value(pt.key, pt.weight) * pt.a;
  return sum;
}

int solve_over_sample(const OptimizationProblem& problem,
                      const std::vector<SamplePoint>& points) {
  if (problem.solver) {
    const int idx = problem.solver(points, problem.family, problem.M);
    if (idx < 0 || idx >= static_cast<int>(problem.family.size())) {
      throw ContractError("inner solver returned an invalid candidate index");
    }
    return idx;
  }
  int best = 0;
  double best_value = -1.0;
  for (std::size_t j = 0; j < problem.family.size(); ++j) {
    const double value = checked_outer(problem.M, sample_candidate_sum(points, problem.family[j]));
    if (value > best_value) {
      best = static_cast<int>(j);
      best_value = value;
    }
  }
  return best;
}

CertifyOutcome certify_impl(const Prepared& prep, const OptimizationProblem& problem,
                            int f_index, double sample_sum, double k, int iteration) {
  if (f_index < 0 || f_index >= static_cast<int>(problem.family.size())) {
    throw ContractError("candidate index out of range");
  }
  const StatFn& f = problem.family[static_cast<std::size_t>(f_index)];

  CertifyOutcome outcome;
  if (problem.certify == CertifyMode::Exact) {
    for (std::size_t i = 0; i < prep.keys.size(); ++i) {
      outcome.reference_sum +=
          prep.m[i] * f.value(prep.keys[i].key, prep.keys[i].weight);
    }
  } else {
    const RandSource vrand{
        derive_seed(problem.validation_seed, static_cast<std::uint64_t>(iteration)),
        problem.rand.mode};
    const BuiltSample validation = build_points(prep, vrand, k);
    outcome.reference_sum = sample_candidate_sum(validation.points, f);
  }
  outcome.reference_value = checked_outer(problem.M, outcome.reference_sum);

  if (problem.test_on_sums) {
    outcome.certified = outcome.reference_sum >= (1.0 - problem.epsilon) * sample_sum;
  } else {
    const double sample_value = checked_outer(problem.M, sample_sum);
    outcome.certified = outcome.reference_value >= (1.0 - problem.epsilon) * sample_value;
  }
  return outcome;
}

}  // namespace

OuterFn outer_identity() {
  return {[](double v) { return v; }, 1.0, "identity"};
}

OuterFn outer_negate_shift(double shift) {
  return {[shift](double v) { return shift - v; }, 1.0,
          "negate-shift:" + format_value(shift)};
}

OuterFn parse_outer_fn(std::string_view spec) {
  if (spec == "identity") return outer_identity();
  constexpr std::string_view prefix = "negate-shift:";
  if (spec.substr(0, prefix.size()) == prefix) {
    const std::string arg(spec.substr(prefix.size()));
    try {
      std::size_t used = 0;
      const double shift = std::stod(arg, &used);
      if (used != arg.size() || !std::isfinite(shift)) throw std::invalid_argument(arg);
      return outer_negate_shift(shift);
    } catch (const std::exception&) {
      throw DataError("malformed shift in outer function '" + std::string(spec) + "'");
    }
  }
  throw DataError("unknown outer function '" + std::string(spec) + "'");
}

std::vector<SamplePoint> optimization_sample(const OptimizationProblem& problem, double k) {
  if (!(k > 0.0)) throw ContractError("size parameter k must be positive");
  return build_points(prepare(problem), problem.rand, k).points;
}

CertifyOutcome certify_candidate(const OptimizationProblem& problem, int f_index,
                                 double sample_sum, double k, int iteration) {
  return certify_impl(prepare(problem), problem, f_index, sample_sum, k, iteration);
}

OptimizeResult optimize(const OptimizationProblem& problem) {
  const Prepared prep = prepare(problem);
  OptimizeResult result;
  double k = 1.0 / (problem.epsilon * problem.epsilon);

  for (int iteration = 0;; ++iteration, k *= 2.0) {
    const BuiltSample built = build_points(prep, problem.rand, k);
    const int best = solve_over_sample(problem, built.points);
    const double sample_sum =
        sample_candidate_sum(built.points, problem.family[static_cast<std::size_t>(best)]);
    const double sample_value = checked_outer(problem.M, sample_sum);

    const CertifyOutcome outcome =
        certify_impl(prep, problem, best, sample_sum, k, iteration);

    IterationRecord record;
    record.k = k;
    record.sample_size = static_cast<int>(built.points.size());
    record.best_index = best;
    record.sample_sum = sample_sum;
    record.sample_value = sample_value;
    record.reference_sum = outcome.reference_sum;
    record.reference_value = outcome.reference_value;
    record.certified = outcome.certified;
    record.lower_bound = outcome.reference_value;
    record.upper_bound = (1.0 + problem.epsilon) * sample_value;
    record.failure_probability =
        std::min(1.0, 2.0 * std::exp(-k * problem.epsilon * problem.epsilon / 3.0));
    result.history.push_back(record);

    if (outcome.certified) {
      result.best_index = best;
      result.sample_sum = sample_sum;
      result.sample_value = sample_value;
      result.reference_sum = outcome.reference_sum;
      result.reference_value = outcome.reference_value;
      result.iterations = static_cast<int>(result.history.size());
      result.final_k = k;

      double union_bound = 0.0;
      for (const IterationRecord& r : result.history) union_bound += r.failure_probability;
      result.notes.push_back("accepted candidate " + std::to_string(best) + " after " +
                             std::to_string(result.iterations) +
                             " iteration(s) at size parameter k=" + format_value(k));
      result.notes.push_back(
          "tail bound on a relative estimate error above epsilon: " +
          format_value(record.failure_probability) + " at the accepted size, " +
          format_value(std::min(1.0, union_bound)) + " summed over every iteration");
      if (problem.certify == CertifyMode::ValidationSample) {
        result.notes.push_back(
            "the certificate compares against an independent estimate rather than the "
            "exact sum; acceptance can err when both estimates deviate together");
      }
      return result;
    }

    if (built.full_data) {
      throw ContractError("acceptance test failed on the full dataset; the outer "
                          "function violates its contract");
    }
  }
}

}  // namespace mosample
