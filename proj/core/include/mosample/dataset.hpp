#pragma once

#include <vector>

#include "mosample/rand.hpp"

namespace mosample {

struct Element {
  Key key;
  double weight = 0.0;

  friend bool operator==(const Element&, const Element&) = default;
};

// A bag of (key, weight) elements. Keys may repeat until aggregate() is
// called; aggregation keeps the maximum weight per key and sorts by key, so
// it is idempotent and insensitive to input order.
struct Dataset {
  std::vector<Element> elements;
  bool aggregated = false;

  std::size_t size() const { return elements.size(); }
};

// Validates an element: finite, non-negative weight. Throws DataError.
void check_element(const Element& e);

Dataset aggregate(const Dataset& data);

double total_weight(const Dataset& data);

}  // namespace mosample
