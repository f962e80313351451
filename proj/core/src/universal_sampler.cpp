#include "mosample/universal_sampler.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <tuple>
#include <utility>

#include "mosample/errors.hpp"

namespace mosample {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_k(int k) {
  if (k < 1) throw ContractError("sample size parameter k must be >= 1");
}

struct Drawn {
  Key key;
  double weight = 0.0;
  double u = 0.0;
};

// Aggregates repeated keys to their maximum weight and draws each key's u.
// Weight-universal samples classify keys by comparing weights, so a key
// whose statistic value would simply be zero elsewhere is an error here.
std::vector<Drawn> draw_keys(const Dataset& data, const RandSource& rand) {
  const Dataset agg = data.aggregated ? data : aggregate(data);
  std::vector<Drawn> keys;
  keys.reserve(agg.elements.size());
  for (const Element& e : agg.elements) {
    check_element(e);
    if (e.weight <= 0.0) {
      throw DataError("key '" + e.key +
                      "' has non-positive weight; weight-universal samples "
                      "require positive weights");
    }
    keys.push_back({e.key, e.weight, rand.u(e.key)});
  }
  return keys;
}

void finalize_monotone(UniversalMonotoneSample& s) {
  for (PoissonEntry& e : s.entries) e.p = s.weight_probability.at(e.weight);
  std::sort(s.entries.begin(), s.entries.end(),
            [](const PoissonEntry& a, const PoissonEntry& b) { return a.key < b.key; });
  std::sort(s.aux.begin(), s.aux.end(),
            [](const AuxKey& a, const AuxKey& b) { return a.key < b.key; });
}

}  // namespace

double monotone_base_probability(const Dataset& data, const Key& key) {
  const Dataset agg = data.aggregated ? data : aggregate(data);
  const double* w = nullptr;
  for (const Element& e : agg.elements) {
    check_element(e);
    if (e.weight <= 0.0) {
      throw DataError("key '" + e.key +
                      "' has non-positive weight; weight-universal samples "
                      "require positive weights");
    }
    if (e.key == key) w = &e.weight;
  }
  if (w == nullptr) throw DataError("key '" + key + "' is not in the data");
  std::size_t at_or_above = 0;
  for (const Element& e : agg.elements) {
    if (e.weight >= *w) ++at_or_above;
  }
  return 1.0 / static_cast<double>(at_or_above);
}

UniversalMonotoneSample universal_monotone_by_weight(const Dataset& data, int k,
                                                     const RandSource& rand) {
  check_k(k);
  std::vector<Drawn> keys = draw_keys(data, rand);
  std::sort(keys.begin(), keys.end(), [](const Drawn& a, const Drawn& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.u != b.u) return a.u < b.u;
    return a.key < b.key;
  });

  UniversalMonotoneSample s;
  s.k = k;
  s.rand = rand;
  s.n_processed = static_cast<std::int64_t>(keys.size());

  // The heap holds the k smallest u values seen so far. A key whose u beats
  // the heap maximum is an entry; a key that loses can still pin down p at
  // its weight when an entry of the same weight precedes it and no smaller
  // same-weight u has done so already (ptau tracks that minimum, prevw the
  // weight it belongs to).
  std::priority_queue<double> low_u;
  double ptau = kInf;
  double prevw = 0.0;
  for (const Drawn& x : keys) {
    if (low_u.size() < static_cast<std::size_t>(k)) {
      s.entries.push_back({x.key, x.weight, x.u, 0.0});
      s.weight_probability[x.weight] = 1.0;
      low_u.push(x.u);
      prevw = x.weight;
    } else if (x.u < low_u.top()) {
      s.entries.push_back({x.key, x.weight, x.u, 0.0});
      s.weight_probability[x.weight] = low_u.top();
      ptau = low_u.top();
      prevw = x.weight;
      low_u.pop();
      low_u.push(x.u);
    } else if (x.u < ptau && x.weight == prevw) {
      s.aux.push_back({x.key, x.weight, x.u});
      s.weight_probability[x.weight] = x.u;
      ptau = x.u;
    }
  }

  finalize_monotone(s);
  return s;
}

UniversalMonotoneSample universal_monotone_by_u(const Dataset& data, int k,
                                                const RandSource& rand) {
  check_k(k);
  std::vector<Drawn> keys = draw_keys(data, rand);
  std::sort(keys.begin(), keys.end(), [](const Drawn& a, const Drawn& b) {
    if (a.u != b.u) return a.u < b.u;
    return a.key < b.key;
  });

  UniversalMonotoneSample s;
  s.k = k;
  s.rand = rand;
  s.n_processed = static_cast<std::int64_t>(keys.size());

  // The frontier holds k keys, ordered so begin() is the lightest (ties:
  // largest u). A heavier key than that one is an entry and evicts it; the
  // first eviction of a weight prices that weight with the evictor's u.
  // An equal-weight key prices it instead, once per weight (prevw), since
  // later same-weight keys rank behind it in u.
  std::set<std::tuple<double, double, Key>> frontier;
  double prevw = 0.0;
  for (const Drawn& x : keys) {
    if (frontier.size() < static_cast<std::size_t>(k)) {
      s.entries.push_back({x.key, x.weight, x.u, 0.0});
      frontier.insert({x.weight, -x.u, x.key});
      continue;
    }
    const auto lowest = frontier.begin();
    const double low_w = std::get<0>(*lowest);
    if (x.weight > low_w) {
      s.entries.push_back({x.key, x.weight, x.u, 0.0});
      s.weight_probability.emplace(low_w, x.u);
      prevw = low_w;
      frontier.erase(lowest);
      frontier.insert({x.weight, -x.u, x.key});
    } else if (x.weight == low_w && x.weight > prevw) {
      s.aux.push_back({x.key, x.weight, x.u});
      s.weight_probability[x.weight] = x.u;
      prevw = x.weight;
    }
  }
  for (const auto& resident : frontier) {
    s.weight_probability.emplace(std::get<0>(resident), 1.0);
  }

  finalize_monotone(s);
  return s;
}

double monotone_conditional_probability(const UniversalMonotoneSample& s, const Key& key) {
  const auto it = std::lower_bound(
      s.entries.begin(), s.entries.end(), key,
      [](const PoissonEntry& e, const Key& want) { return e.key < want; });
  if (it == s.entries.end() || it->key != key) {
    throw ContractError("key '" + key + "' is not an entry of this sample");
  }
  const double w = it->weight;

  std::vector<double> us;
  for (const PoissonEntry& e : s.entries) {
    if (e.weight >= w) us.push_back(e.u);
  }
  for (const AuxKey& a : s.aux) {
    if (a.weight >= w) us.push_back(a.u);
  }
  if (us.size() <= static_cast<std::size_t>(s.k)) return 1.0;
  std::nth_element(us.begin(), us.begin() + s.k, us.end());
  return us[static_cast<std::size_t>(s.k)];
}

UniversalMonotoneSample universal_monotone_merge(const UniversalMonotoneSample& a,
                                                 const UniversalMonotoneSample& b) {
  if (a.k != b.k || !(a.rand == b.rand)) {
    throw ContractError("universal_monotone_merge: samples built with different parameters");
  }
  Dataset pooled;
  const auto feed = [&pooled](const UniversalMonotoneSample& s) {
    for (const PoissonEntry& e : s.entries) pooled.elements.push_back({e.key, e.weight});
    for (const AuxKey& z : s.aux) pooled.elements.push_back({z.key, z.weight});
  };
  feed(a);
  feed(b);
  UniversalMonotoneSample merged = universal_monotone_by_weight(pooled, a.k, a.rand);
  merged.n_processed = a.n_processed + b.n_processed;
  return merged;
}

UniversalCappingSample universal_capping_build(const Dataset& data, int k,
                                               const RandSource& rand) {
  check_k(k);

  struct Cand {
    Key key;
    double weight = 0.0;
    double u = 0.0;
    double rank = 0.0;
    double seed = 0.0;  // rank / weight
    int h = 0;
    int l = 0;
  };
  std::vector<Cand> keys;
  keys.reserve(data.elements.size());
  {
    std::set<Key> seen;
    for (const Element& e : data.elements) {
      check_element(e);
      if (!seen.insert(e.key).second) {
        throw DataError("duplicate key '" + e.key + "' in capping input; aggregate first");
      }
      if (e.weight <= 0.0) {
        throw DataError("key '" + e.key +
                        "' has non-positive weight; weight-universal samples "
                        "require positive weights");
      }
      const double u = rand.u(e.key);
      const double r = rand.rank(u);
      keys.push_back({e.key, e.weight, u, r, r / e.weight, 0, 0});
    }
  }

  const std::size_t cap = static_cast<std::size_t>(k) + 1;

  // Pass 1: h = |{y : w_y >= w_x, u_y < u_x}|, scanning heavy to light.
  // Position queries against the k+1 smallest u values seen so far answer h
  // exactly whenever h <= k; anything ranked past that is dropped, and its
  // u can never matter again because the k+1 smaller ones outrank it for
  // every later key too.
  std::sort(keys.begin(), keys.end(), [](const Cand& a, const Cand& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.u != b.u) return a.u < b.u;
    return a.key < b.key;
  });
  std::vector<Cand> survivors;
  std::vector<std::pair<double, Key>> low_u;  // ascending, size <= k+1
  for (Cand& x : keys) {
    const auto pos = std::lower_bound(low_u.begin(), low_u.end(),
                                      std::make_pair(x.u, x.key)) -
                     low_u.begin();
    if (pos > k) continue;
    x.h = static_cast<int>(pos);
    survivors.push_back(x);
    low_u.insert(low_u.begin() + pos, {x.u, x.key});
    if (low_u.size() > cap) low_u.pop_back();
  }

  // Pass 2: l = |{y : w_y < w_x, seed_y < seed_x}|, scanning light to heavy
  // in equal-weight batches so only strictly lighter seeds are consulted.
  // Survivor-only counting is exact for every key this pass keeps: a key
  // with a dropped seed-dominator always has k+1 surviving dominators as
  // well, so it is dropped here either way. Keys dropped by this pass still
  // feed the structure, because their seeds keep counting toward heavier
  // keys' l.
  std::sort(survivors.begin(), survivors.end(), [](const Cand& a, const Cand& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.u != b.u) return a.u < b.u;
    return a.key < b.key;
  });
  std::vector<Cand> retained;
  std::vector<std::pair<double, Key>> low_seed;  // ascending, size <= k+1
  for (std::size_t i = 0; i < survivors.size();) {
    std::size_t j = i;
    while (j < survivors.size() && survivors[j].weight == survivors[i].weight) ++j;
    for (std::size_t t = i; t < j; ++t) {
      Cand& x = survivors[t];
      const auto pos = std::lower_bound(low_seed.begin(), low_seed.end(),
                                        std::make_pair(x.seed, x.key)) -
                       low_seed.begin();
      x.l = static_cast<int>(pos);
      if (x.h + x.l <= k) retained.push_back(x);
    }
    for (std::size_t t = i; t < j; ++t) {
      const Cand& x = survivors[t];
      const auto pos = std::lower_bound(low_seed.begin(), low_seed.end(),
                                        std::make_pair(x.seed, x.key)) -
                       low_seed.begin();
      if (pos > k) continue;
      low_seed.insert(low_seed.begin() + pos, {x.seed, x.key});
      if (low_seed.size() > cap) low_seed.pop_back();
    }
    i = j;
  }

  // Pass 3: price each sampled key x as a bottom-k draw of the statistic
  // min(w, w_x). Its threshold is the (k+1)-st smallest capped seed
  // rank_y / min(w_y, w_x) over the retained keys; computing it over all
  // keys would give the same value, since the k+1 lowest capped seeds all
  // sit at or below the h + l = k boundary. A boundary key that realizes
  // some entry's threshold is marked needed.
  UniversalCappingSample s;
  s.k = k;
  s.rand = rand;
  std::set<Key> needed;
  std::vector<std::pair<double, std::size_t>> capped;  // (capped seed, retained index)
  for (const Cand& x : retained) {
    if (x.h + x.l >= k) {
      s.aux.push_back({x.key, x.weight, x.u, x.h, x.l, false});
      continue;
    }
    double tau = kInf;
    const Key* realizer = nullptr;
    if (retained.size() >= cap) {
      capped.clear();
      capped.reserve(retained.size());
      for (std::size_t idx = 0; idx < retained.size(); ++idx) {
        const Cand& y = retained[idx];
        capped.push_back({y.rank / std::min(y.weight, x.weight), idx});
      }
      const auto order = [&retained](const std::pair<double, std::size_t>& a,
                                     const std::pair<double, std::size_t>& b) {
        if (a.first != b.first) return a.first < b.first;
        return retained[a.second].key < retained[b.second].key;
      };
      std::nth_element(capped.begin(), capped.begin() + k, capped.end(), order);
      tau = capped[static_cast<std::size_t>(k)].first;
      realizer = &retained[capped[static_cast<std::size_t>(k)].second].key;
    }
    const double p = conditional_inclusion(rand.mode, x.weight, tau);
    s.entries.push_back({x.key, x.weight, x.u, x.h, x.l, p});
    if (realizer != nullptr) needed.insert(*realizer);
  }
  for (CappingAux& z : s.aux) {
    if (needed.count(z.key) != 0) z.needed = true;
  }

  std::sort(s.entries.begin(), s.entries.end(),
            [](const CappingEntry& a, const CappingEntry& b) { return a.key < b.key; });
  std::sort(s.aux.begin(), s.aux.end(),
            [](const CappingAux& a, const CappingAux& b) { return a.key < b.key; });
  return s;
}

UniversalCappingSample universal_capping_merge(const UniversalCappingSample& a,
                                               const UniversalCappingSample& b) {
  if (a.k != b.k || !(a.rand == b.rand)) {
    throw ContractError("universal_capping_merge: samples built with different parameters");
  }
  Dataset pooled;
  const auto feed = [&pooled](const UniversalCappingSample& s) {
    for (const CappingEntry& e : s.entries) pooled.elements.push_back({e.key, e.weight});
    for (const CappingAux& z : s.aux) pooled.elements.push_back({z.key, z.weight});
  };
  feed(a);
  feed(b);
  return universal_capping_build(aggregate(pooled), a.k, a.rand);
}

}  // namespace mosample
