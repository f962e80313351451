#pragma once

#include <vector>

namespace mosample {

// Error-free accumulator for finite doubles. The running sum is held as a
// list of nonoverlapping partials (Shewchuk's method, the same scheme behind
// Python's math.fsum), so no addition ever loses a bit and the value carried
// is the exact real sum of everything fed in, independent of order.
//
// Samples use this for their f-totals: a total built shard by shard and then
// combined must equal the one-shot total bit for bit, which plain double
// accumulation cannot promise once f-values stop being exactly summable.
class ExactSum {
 public:
  // Adds one finite double. Exact.
  void add(double x);

  // Adds the other accumulator's exact value. Exact; safe to self-add.
  void add(const ExactSum& other);

  // The exact sum rounded once to the nearest double, ties to even.
  double rounded() const;

  // The exact sum as a canonical list of doubles: the rounded value, then
  // the rounded remainder, and so on until the remainder is exactly zero.
  // The list is a function of the value alone, so two accumulators hold the
  // same real number iff their terms are equal. Empty means exactly zero.
  std::vector<double> terms() const;

  bool zero() const { return partials_.empty(); }

 private:
  std::vector<double> partials_;
};

// terms() split into the stored shape samples use: `head` is the rounded
// total (zero when the sum is) and `tail` the remaining terms, usually none.
struct SplitTotal {
  double head = 0.0;
  std::vector<double> tail;
};

SplitTotal split_total(const ExactSum& sum);

}  // namespace mosample
