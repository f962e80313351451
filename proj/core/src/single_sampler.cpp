#include "mosample/single_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mosample/errors.hpp"
#include "mosample/exact_sum.hpp"

namespace mosample {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool seed_order(const BotkEntry& a, const BotkEntry& b) {
  return a.seed < b.seed || (a.seed == b.seed && a.key < b.key);
}

void check_k(int k) {
  if (k < 1) throw ContractError("sample size parameter k must be >= 1");
}

}  // namespace

double pps_probability(double f_value, int k, double total) {
  check_k(k);
  if (total <= 0.0) throw DataError("empty objective support (total is zero)");
  if (f_value < 0.0) throw DataError("negative statistic value");
  return std::min(1.0, k * (f_value / total));
}

PoissonSample pps_build(const Dataset& data, const StatFn& f, int k, const RandSource& rand) {
  check_k(k);
  PoissonSample s;
  s.f = f;
  s.k = k;
  s.rand = rand;

  std::set<Key> seen;
  ExactSum total;
  for (const Element& e : data.elements) {
    check_element(e);
    if (!seen.insert(e.key).second) {
      throw DataError("duplicate key '" + e.key + "' in pps input; aggregate first");
    }
    total.add(f.value(e.key, e.weight));
  }
  const SplitTotal split = split_total(total);
  if (split.head <= 0.0) throw DataError("empty objective support (total is zero)");
  s.total = split.head;
  s.total_tail = split.tail;

  for (const Element& e : data.elements) {
    double p = std::min(1.0, k * (f.value(e.key, e.weight) / s.total));
    double u = rand.u(e.key);
    if (u <= p) s.entries.push_back({e.key, e.weight, u, p});
  }
  std::sort(s.entries.begin(), s.entries.end(),
            [](const PoissonEntry& a, const PoissonEntry& b) { return a.key < b.key; });
  return s;
}

PoissonSample pps_merge(const PoissonSample& a, const PoissonSample& b) {
  if (!(a.f == b.f) || a.k != b.k || !(a.rand == b.rand)) {
    throw ContractError("pps_merge: samples built with different parameters");
  }
  PoissonSample s;
  s.f = a.f;
  s.k = a.k;
  s.rand = a.rand;
  ExactSum total;
  total.add(a.total);
  for (double t : a.total_tail) total.add(t);
  total.add(b.total);
  for (double t : b.total_tail) total.add(t);
  const SplitTotal split = split_total(total);
  s.total = split.head;
  s.total_tail = split.tail;

  std::vector<PoissonEntry> candidates;
  candidates.reserve(a.entries.size() + b.entries.size());
  candidates.insert(candidates.end(), a.entries.begin(), a.entries.end());
  candidates.insert(candidates.end(), b.entries.begin(), b.entries.end());
  std::sort(candidates.begin(), candidates.end(),
            [](const PoissonEntry& x, const PoissonEntry& y) { return x.key < y.key; });
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].key == candidates[i - 1].key) {
      throw DataError("pps_merge: key '" + candidates[i].key + "' appears in both shards");
    }
  }
  for (PoissonEntry e : candidates) {
    e.p = std::min(1.0, s.k * (s.f.value(e.key, e.weight) / s.total));
    if (e.u <= e.p) s.entries.push_back(std::move(e));
  }
  return s;
}

double BottomKSample::tau() const { return boundary ? boundary->seed : kInf; }

BottomKBuilder::BottomKBuilder(StatFn f, int k, RandSource rand)
    : f_(std::move(f)), k_(k), rand_(rand) {
  check_k(k);
}

bool BottomKBuilder::heap_less(std::size_t a, std::size_t b) const {
  return seed_order(heap_[a], heap_[b]);
}

void BottomKBuilder::sift_up(std::size_t i) {
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (!heap_less(parent, i)) break;
    std::swap(heap_[parent], heap_[i]);
    slot_[heap_[parent].key] = parent;
    slot_[heap_[i].key] = i;
    i = parent;
  }
}

void BottomKBuilder::sift_down(std::size_t i) {
  const std::size_t n = heap_.size();
  for (;;) {
    std::size_t largest = i;
    std::size_t l = 2 * i + 1, r = 2 * i + 2;
    if (l < n && heap_less(largest, l)) largest = l;
    if (r < n && heap_less(largest, r)) largest = r;
    if (largest == i) break;
    std::swap(heap_[largest], heap_[i]);
    slot_[heap_[largest].key] = largest;
    slot_[heap_[i].key] = i;
    i = largest;
  }
}

void BottomKBuilder::offer(const Element& e) {
  check_element(e);
  const std::size_t cap = static_cast<std::size_t>(k_) + 1;

  if (auto it = slot_.find(e.key); it != slot_.end()) {
    std::size_t i = it->second;
    BotkEntry& held = heap_[i];
    if (e.weight <= held.weight) return;
    double fv = f_.value(e.key, e.weight);
    if (fv <= 0.0) {
      slot_.erase(it);
      if (i + 1 != heap_.size()) {
        heap_[i] = std::move(heap_.back());
        heap_.pop_back();
        const Key moved = heap_[i].key;
        slot_[moved] = i;
        sift_up(i);
        sift_down(slot_[moved]);
      } else {
        heap_.pop_back();
      }
      return;
    }
    held.weight = e.weight;
    held.seed = f_seed(rand_.rank(held.u), fv);
    sift_up(i);
    sift_down(slot_[e.key]);
    return;
  }

  double fv = f_.value(e.key, e.weight);
  if (fv <= 0.0) return;
  BotkEntry cand{e.key, e.weight, rand_.u(e.key), 0.0};
  cand.seed = f_seed(rand_.rank(cand.u), fv);

  if (heap_.size() < cap) {
    heap_.push_back(std::move(cand));
    slot_[heap_.back().key] = heap_.size() - 1;
    sift_up(heap_.size() - 1);
    return;
  }
  if (!seed_order(cand, heap_[0])) return;
  slot_.erase(heap_[0].key);
  slot_[cand.key] = 0;
  heap_[0] = std::move(cand);
  sift_down(0);
}

BottomKSample BottomKBuilder::finish() const {
  BottomKSample s;
  s.f = f_;
  s.k = k_;
  s.rand = rand_;
  std::vector<BotkEntry> sorted = heap_;
  std::sort(sorted.begin(), sorted.end(), seed_order);
  if (sorted.size() > static_cast<std::size_t>(k_)) {
    s.boundary = sorted.back();
    sorted.pop_back();
  }
  s.entries = std::move(sorted);
  return s;
}

BottomKSample botk_build(const Dataset& data, const StatFn& f, int k, const RandSource& rand) {
  BottomKBuilder builder(f, k, rand);
  for (const Element& e : data.elements) builder.offer(e);
  return builder.finish();
}

BottomKSample botk_merge(const BottomKSample& a, const BottomKSample& b) {
  if (!(a.f == b.f) || a.k != b.k || !(a.rand == b.rand)) {
    throw ContractError("botk_merge: samples built with different parameters");
  }
  BottomKBuilder builder(a.f, a.k, a.rand);
  auto feed = [&builder](const BottomKSample& s) {
    for (const BotkEntry& e : s.entries) builder.offer({e.key, e.weight});
    if (s.boundary) builder.offer({s.boundary->key, s.boundary->weight});
  };
  feed(a);
  feed(b);
  return builder.finish();
}

double conditional_inclusion(RankMode mode, double f_value, double tau) {
  if (f_value <= 0.0) return 0.0;
  if (std::isinf(tau)) return 1.0;
  if (mode == RankMode::Priority) return std::min(1.0, f_value * tau);
  return -std::expm1(-f_value * tau);
}

double botk_conditional_probability(const BottomKSample& s, const Key& key, double w) {
  return conditional_inclusion(s.rand.mode, s.f.value(key, w), s.tau());
}

}  // namespace mosample
