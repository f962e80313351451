#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mosample/dataset.hpp"

namespace mosample {

enum class StatKind { Sum, Count, Threshold, Cap, Moment, Combo, Table };

// A non-negative per-key statistic f_x. All kinds except Table are functions
// of the weight alone:
//   sum       f(w) = w
//   count     f(w) = 1 for w > 0, else 0
//   thresh:T  f(w) = 1 for w >= T, else 0           (T > 0)
//   cap:T     f(w) = min(w, T) for w > 0, else 0    (T > 0)
//   moment:p  f(w) = w^p for w > 0, else 0          (p > 0)
//   combo     f(w) = sum_i a_i f_i(w)               (a_i >= 0)
// Table maps keys directly to values; missing keys evaluate to 0.
class StatFn {
 public:
  StatFn() : kind_(StatKind::Sum) {}

  static StatFn sum() { return StatFn(StatKind::Sum, 0.0); }
  static StatFn count() { return StatFn(StatKind::Count, 0.0); }
  static StatFn threshold(double t);
  static StatFn cap(double t);
  static StatFn moment(double p);
  static StatFn combo(std::vector<std::pair<double, StatFn>> parts);
  static StatFn table(std::map<Key, double> values);

  StatKind kind() const { return kind_; }
  double param() const { return param_; }
  const std::vector<std::pair<double, StatFn>>& parts() const { return parts_; }
  const std::map<Key, double>& table_values() const;

  // Value for a weight-only statistic. Table (anywhere in a combo) requires
  // the key and throws ContractError here.
  double evaluate(double w) const;

  // Value of f_x for a concrete element; valid for every kind.
  double value(const Key& key, double w) const;

  bool weight_only() const;

  // Canonical spec string in the CLI syntax above. Table renders as
  // "table:<n entries>" for diagnostics and is not round-trippable as text.
  std::string spec() const;

  bool operator==(const StatFn& other) const;

 private:
  StatFn(StatKind kind, double param) : kind_(kind), param_(param) {}

  StatKind kind_;
  double param_ = 0.0;
  std::vector<std::pair<double, StatFn>> parts_;
  std::shared_ptr<const std::map<Key, double>> table_;
};

// Parses the CLI statistic syntax, e.g. "cap:5" or
// "combo:[(0.5,sum),(2,thresh:10)]". Throws DataError on malformed input.
StatFn parse_stat(std::string_view spec);

// A query domain: an explicit key set, a key-byte prefix, or everything.
class Segment {
 public:
  static Segment all();
  static Segment keys(std::set<Key> keys);
  static Segment prefix(std::string prefix);

  bool contains(const Key& key) const;
  std::string describe() const;

 private:
  enum class Kind { All, Keys, Prefix };
  Kind kind_ = Kind::All;
  std::set<Key> keys_;
  std::string prefix_;
};

// Exact sum of f over the segment, with multi-occurrence keys aggregated to
// their maximum weight first.
double segment_sum_exact(const Dataset& data, const StatFn& f, const Segment& segment);

// Disparity rho(f,g) = max_x(f_x/g_x) * max_x(g_x/f_x) over keys of the
// aggregated data where either value is positive. Returns +inf when the
// supports differ, exactly 1 when g is a scaling of f, and 1 on empty
// support (vacuous). Argmax selection uses cross-multiplied comparisons, so
// integral values below 2^53 give exact results.
double disparity(const StatFn& f, const StatFn& g, const Dataset& data);

// Whether every key with g_x > 0 provably has f_x > 0, judged from the
// function shapes alone (used for estimator bias warnings).
enum class SupportCover { Covers, Gap, Unknown };
SupportCover support_covers(const StatFn& f, const StatFn& g);

}  // namespace mosample
