#include "mosample/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "mosample/errors.hpp"

namespace mosample {

void check_element(const Element& e) {
  if (!std::isfinite(e.weight)) {
    throw DataError("non-finite weight for key '" + e.key + "'");
  }
  if (e.weight < 0.0) {
    throw DataError("negative weight for key '" + e.key + "'");
  }
}

Dataset aggregate(const Dataset& data) {
  Dataset out;
  out.elements = data.elements;
  std::sort(out.elements.begin(), out.elements.end(), [](const Element& a, const Element& b) {
    return a.key < b.key || (a.key == b.key && a.weight > b.weight);
  });
  auto last = std::unique(out.elements.begin(), out.elements.end(),
                          [](const Element& a, const Element& b) { return a.key == b.key; });
  out.elements.erase(last, out.elements.end());
  out.aggregated = true;
  return out;
}

double total_weight(const Dataset& data) {
  double sum = 0.0;
  for (const Element& e : data.elements) sum += e.weight;
  return sum;
}

}  // namespace mosample
