#include "mosample/multi_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mosample/errors.hpp"
#include "mosample/exact_sum.hpp"

namespace mosample {

namespace {

void check_objectives(const std::vector<Objective>& objectives) {
  if (objectives.empty()) throw DataError("no objectives given");
  for (const Objective& o : objectives) {
    if (o.k < 1) throw ContractError("objective sample size must be at least 1");
  }
}

struct ObjectiveTotals {
  std::vector<double> heads;
  std::vector<std::vector<double>> tails;
};

ObjectiveTotals objective_totals(const Dataset& data, const std::vector<Objective>& objectives,
                                 std::vector<std::string>* warnings) {
  std::vector<ExactSum> sums(objectives.size());
  for (const Element& e : data.elements) {
    check_element(e);
    for (std::size_t i = 0; i < objectives.size(); ++i) {
      sums[i].add(objectives[i].f.value(e.key, e.weight));
    }
  }
  ObjectiveTotals totals;
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    SplitTotal split = split_total(sums[i]);
    totals.heads.push_back(split.head);
    totals.tails.push_back(std::move(split.tail));
    if (warnings && totals.heads[i] <= 0) {
      warnings->push_back("objective " + objectives[i].f.spec() + " has empty support");
    }
  }
  return totals;
}

void check_no_duplicates(const Dataset& data) {
  std::set<Key> seen;
  for (const Element& e : data.elements) {
    if (!seen.insert(e.key).second) {
      throw DataError("duplicate key '" + e.key + "' in pps input; aggregate first");
    }
  }
}

}  // namespace

double mo_pps_probability(const std::vector<Objective>& objectives,
                          const std::vector<double>& totals, const Key& key, double weight) {
  if (objectives.size() != totals.size()) {
    throw ContractError("objective/total count mismatch");
  }
  check_objectives(objectives);
  double p = 0.0;
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    if (totals[i] <= 0) continue;
    p = std::max(p, pps_probability(objectives[i].f.value(key, weight), objectives[i].k, totals[i]));
  }
  return p;
}

MultiPpsSample mo_pps_build(const Dataset& data, const std::vector<Objective>& objectives,
                            const RandSource& rand) {
  check_objectives(objectives);
  check_no_duplicates(data);
  MultiPpsSample s;
  s.objectives = objectives;
  s.rand = rand;
  ObjectiveTotals totals = objective_totals(data, objectives, &s.warnings);
  s.totals = std::move(totals.heads);
  s.total_tails = std::move(totals.tails);
  for (const Element& e : data.elements) {
    double p = mo_pps_probability(objectives, s.totals, e.key, e.weight);
    double u = rand.u(e.key);
    if (p > 0 && u <= p) s.entries.push_back({e.key, e.weight, u, p});
  }
  std::sort(s.entries.begin(), s.entries.end(),
            [](const PoissonEntry& a, const PoissonEntry& b) { return a.key < b.key; });
  return s;
}

MultiPpsSample mo_pps_merge(const MultiPpsSample& a, const MultiPpsSample& b) {
  if (a.objectives != b.objectives || a.rand != b.rand) {
    throw ContractError("cannot merge samples with different objectives or randomness");
  }
  MultiPpsSample s;
  s.objectives = a.objectives;
  s.rand = a.rand;
  s.totals.resize(a.totals.size());
  s.total_tails.resize(a.totals.size());
  for (std::size_t i = 0; i < a.totals.size(); ++i) {
    ExactSum total;
    total.add(a.totals[i]);
    if (i < a.total_tails.size()) {
      for (double t : a.total_tails[i]) total.add(t);
    }
    total.add(b.totals[i]);
    if (i < b.total_tails.size()) {
      for (double t : b.total_tails[i]) total.add(t);
    }
    SplitTotal split = split_total(total);
    s.totals[i] = split.head;
    s.total_tails[i] = std::move(split.tail);
  }
  for (std::size_t i = 0; i < s.totals.size(); ++i) {
    if (s.totals[i] <= 0) {
      s.warnings.push_back("objective " + s.objectives[i].f.spec() + " has empty support");
    }
  }
  std::vector<PoissonEntry> pool;
  pool.reserve(a.entries.size() + b.entries.size());
  pool.insert(pool.end(), a.entries.begin(), a.entries.end());
  pool.insert(pool.end(), b.entries.begin(), b.entries.end());
  std::sort(pool.begin(), pool.end(),
            [](const PoissonEntry& x, const PoissonEntry& y) { return x.key < y.key; });
  for (std::size_t i = 1; i < pool.size(); ++i) {
    if (pool[i].key == pool[i - 1].key) {
      throw DataError("key '" + pool[i].key + "' appears in both shards");
    }
  }
  for (PoissonEntry e : pool) {
    e.p = mo_pps_probability(s.objectives, s.totals, e.key, e.weight);
    if (e.u <= e.p) s.entries.push_back(e);
  }
  return s;
}

double mo_pps_overhead(const Dataset& data, const std::vector<StatFn>& functions) {
  if (functions.empty()) throw DataError("no objectives given");
  std::vector<Objective> objectives;
  for (const StatFn& f : functions) objectives.push_back({f, 1});
  const std::vector<double> totals = objective_totals(data, objectives, nullptr).heads;
  double sum = 0.0;
  for (const Element& e : data.elements) {
    double best = 0.0;
    for (std::size_t i = 0; i < functions.size(); ++i) {
      if (totals[i] <= 0) continue;
      best = std::max(best, functions[i].value(e.key, e.weight) / totals[i]);
    }
    sum += best;
  }
  return sum;
}

MultiBotkBuilder::MultiBotkBuilder(std::vector<Objective> objectives, RandSource rand)
    : objectives_(std::move(objectives)), rand_(rand) {
  check_objectives(objectives_);
  for (const Objective& o : objectives_) heaps_.emplace_back(o.f, o.k, rand_);
}

void MultiBotkBuilder::offer(const Element& e) {
  check_element(e);
  for (BottomKBuilder& h : heaps_) h.offer(e);
}

MultiBotkSample MultiBotkBuilder::finish() const {
  MultiBotkSample s;
  s.objectives = objectives_;
  s.rand = rand_;

  std::map<Key, std::pair<double, double>> in_union;  // key -> (weight, u)
  std::map<Key, std::pair<double, double>> candidates;
  for (const BottomKBuilder& h : heaps_) {
    BottomKSample dedicated = h.finish();
    for (const BotkEntry& e : dedicated.entries) in_union[e.key] = {e.weight, e.u};
    if (dedicated.boundary) {
      candidates[dedicated.boundary->key] = {dedicated.boundary->weight, dedicated.boundary->u};
    }
  }
  for (const auto& [key, wu] : candidates) {
    if (!in_union.count(key)) s.aux.push_back({key, wu.first, wu.second});
  }
  for (const auto& [key, wu] : in_union) {
    s.entries.push_back({key, wu.first, wu.second, 0.0});
  }
  s.taus = mo_botk_recompute_taus(s);
  for (PoissonEntry& e : s.entries) {
    double p = 0.0;
    for (std::size_t i = 0; i < objectives_.size(); ++i) {
      double fv = objectives_[i].f.value(e.key, e.weight);
      p = std::max(p, conditional_inclusion(rand_.mode, fv, s.taus[i]));
    }
    e.p = p;
  }
  return s;
}

std::vector<double> mo_botk_recompute_taus(const MultiBotkSample& s) {
  std::vector<double> taus;
  for (const Objective& o : s.objectives) {
    std::vector<double> seeds;
    for (const PoissonEntry& e : s.entries) {
      seeds.push_back(f_seed(s.rand.rank_of_key(e.key), o.f.value(e.key, e.weight)));
    }
    for (const AuxKey& e : s.aux) {
      seeds.push_back(f_seed(s.rand.rank_of_key(e.key), o.f.value(e.key, e.weight)));
    }
    std::sort(seeds.begin(), seeds.end());
    taus.push_back(seeds.size() > static_cast<std::size_t>(o.k)
                       ? seeds[static_cast<std::size_t>(o.k)]
                       : std::numeric_limits<double>::infinity());
  }
  return taus;
}

MultiBotkSample mo_botk_build(const Dataset& data, const std::vector<Objective>& objectives,
                              const RandSource& rand) {
  MultiBotkBuilder b(objectives, rand);
  for (const Element& e : data.elements) b.offer(e);
  return b.finish();
}

MultiBotkSample mo_botk_merge(const MultiBotkSample& a, const MultiBotkSample& b) {
  if (a.objectives != b.objectives || a.rand != b.rand) {
    throw ContractError("cannot merge samples with different objectives or randomness");
  }
  MultiBotkBuilder builder(a.objectives, a.rand);
  for (const MultiBotkSample* s : {&a, &b}) {
    for (const PoissonEntry& e : s->entries) builder.offer({e.key, e.weight});
    for (const AuxKey& e : s->aux) builder.offer({e.key, e.weight});
  }
  return builder.finish();
}

OverheadEstimate mo_botk_overhead(const Dataset& data, const std::vector<StatFn>& functions,
                                  int k, int trials, std::uint64_t base_seed, RankMode mode) {
  if (trials < 1) throw ContractError("overhead estimate needs at least one trial");
  std::vector<Objective> objectives;
  for (const StatFn& f : functions) objectives.push_back({f, k});
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    RandSource rand{derive_seed(base_seed, static_cast<std::uint64_t>(t)), mode};
    double size = static_cast<double>(mo_botk_build(data, objectives, rand).entries.size()) / k;
    sum += size;
    sumsq += size * size;
  }
  OverheadEstimate out;
  out.trials = trials;
  out.value = sum / trials;
  double var = std::max(0.0, sumsq / trials - out.value * out.value);
  out.std_error = trials > 1 ? std::sqrt(var / (trials - 1)) : 0.0;
  return out;
}

UpperBoundSample ub_build(const Dataset& data, const std::map<Key, double>& pi, int k,
                          const RandSource& rand, const std::map<Key, double>* base_p) {
  if (k < 1) throw ContractError("sample size must be at least 1");
  check_no_duplicates(data);
  UpperBoundSample s;
  s.k = k;
  s.rand = rand;
  for (const Element& e : data.elements) {
    check_element(e);
    auto it = pi.find(e.key);
    if (it == pi.end()) throw DataError("no probability bound for key '" + e.key + "'");
    double bound = it->second;
    if (!(bound > 0) || bound > 1 || !std::isfinite(bound)) {
      throw DataError("probability bound for key '" + e.key + "' outside (0, 1]");
    }
    if (base_p) {
      auto bp = base_p->find(e.key);
      if (bp != base_p->end() && bound < bp->second) {
        throw ContractError("bound below base probability for key '" + e.key + "'");
      }
    }
    double p = std::min(1.0, k * bound);
    double u = rand.u(e.key);
    if (u <= p) s.entries.push_back({e.key, e.weight, u, p});
  }
  return s;
}

}  // namespace mosample
