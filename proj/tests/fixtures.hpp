#pragma once

#include <array>
#include <set>
#include <string>

#include "mosample/dataset.hpp"
#include "mosample/stat_fn.hpp"

namespace fixtures {

// Shared ten-key dataset used across suites. Totals: sum 385, count 10,
// thresh_10 4, cap_5 41, 2-moment 55303.
inline mosample::Dataset ten_keys() {
  mosample::Dataset d;
  d.elements = {{"u1", 5},   {"u3", 100}, {"u10", 23}, {"u12", 7},  {"u17", 1},
                {"u24", 5},  {"u31", 220}, {"u42", 19}, {"u43", 3},  {"u55", 2}};
  return d;
}

inline const std::array<std::string, 10> kTenKeyOrder = {
    "u1", "u3", "u10", "u12", "u17", "u24", "u31", "u42", "u43", "u55"};

inline mosample::Segment segment_h() {
  return mosample::Segment::keys({"u3", "u12", "u42", "u55"});
}

// Pinned pps inclusion probabilities at k = 3 for the ten-key dataset,
// rounded to two decimals: p = min{1, 3 f_x / total}.
inline const std::array<double, 10> kPpsSumK3 = {0.04, 0.78, 0.18, 0.05, 0.01,
                                                 0.04, 1.00, 0.15, 0.02, 0.02};
inline const std::array<double, 10> kPpsThresh10K3 = {0.00, 0.75, 0.75, 0.00, 0.00,
                                                      0.00, 0.75, 0.75, 0.00, 0.00};
inline const std::array<double, 10> kPpsCap5K3 = {0.37, 0.37, 0.37, 0.37, 0.07,
                                                  0.37, 0.37, 0.37, 0.22, 0.15};

}  // namespace fixtures
