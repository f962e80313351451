#include "mosample/exact_sum.hpp"

#include <cmath>
#include <cstddef>

namespace mosample {

void ExactSum::add(double x) {
  std::size_t kept = 0;
  for (std::size_t j = 0; j < partials_.size(); ++j) {
    double y = partials_[j];
    if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) partials_[kept++] = lo;
    x = hi;
  }
  partials_.resize(kept);
  if (x != 0.0) partials_.push_back(x);
}

void ExactSum::add(const ExactSum& other) {
  const std::vector<double> copy(other.partials_);
  for (double t : copy) add(t);
}

double ExactSum::rounded() const {
  if (partials_.empty()) return 0.0;
  std::size_t n = partials_.size();
  double hi = partials_[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials_[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  // Halfway case: the discarded part is exactly half an ulp, and the sign of
  // the partials below decides which neighbour the true value is closer to.
  if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
    const double y2 = lo * 2.0;
    const double x2 = hi + y2;
    if (y2 == x2 - hi) hi = x2;
  }
  return hi;
}

std::vector<double> ExactSum::terms() const {
  ExactSum rest = *this;
  std::vector<double> out;
  while (!rest.partials_.empty()) {
    const double h = rest.rounded();
    if (h == 0.0) break;
    out.push_back(h);
    rest.add(-h);
  }
  return out;
}

SplitTotal split_total(const ExactSum& sum) {
  SplitTotal t;
  std::vector<double> all = sum.terms();
  if (!all.empty()) {
    t.head = all.front();
    t.tail.assign(all.begin() + 1, all.end());
  }
  return t;
}

}  // namespace mosample
