#include "mosample/stat_fn.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "mosample/errors.hpp"

namespace mosample {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_param(const char* kind, double v) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw DataError(std::string(kind) + " parameter must be finite and positive");
  }
}

std::string format_param(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Lower edge of {w : f(w) > 0} for weight-only functions.
struct SupportEdge {
  double lb = 0.0;
  bool inclusive = false;  // exclusive edge at 0 for sum/count/cap/moment
};

SupportEdge support_edge(const StatFn& f) {
  switch (f.kind()) {
    case StatKind::Threshold:
      return {f.param(), true};
    case StatKind::Combo: {
      SupportEdge best{kInf, true};
      for (const auto& [a, part] : f.parts()) {
        if (a <= 0.0) continue;
        SupportEdge e = support_edge(part);
        if (e.lb < best.lb || (e.lb == best.lb && e.inclusive)) best = e;
      }
      return best;
    }
    default:
      return {0.0, false};
  }
}

}  // namespace

StatFn StatFn::threshold(double t) {
  check_param("thresh", t);
  return StatFn(StatKind::Threshold, t);
}

StatFn StatFn::cap(double t) {
  check_param("cap", t);
  return StatFn(StatKind::Cap, t);
}

StatFn StatFn::moment(double p) {
  check_param("moment", p);
  return StatFn(StatKind::Moment, p);
}

StatFn StatFn::combo(std::vector<std::pair<double, StatFn>> parts) {
  if (parts.empty()) throw DataError("combo needs at least one part");
  for (const auto& [a, part] : parts) {
    if (!std::isfinite(a) || a < 0.0) {
      throw DataError("combo coefficient must be finite and non-negative");
    }
  }
  StatFn f(StatKind::Combo, 0.0);
  f.parts_ = std::move(parts);
  return f;
}

StatFn StatFn::table(std::map<Key, double> values) {
  for (const auto& [key, v] : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DataError("table value for key '" + key + "' must be finite and non-negative");
    }
  }
  StatFn f(StatKind::Table, 0.0);
  f.table_ = std::make_shared<const std::map<Key, double>>(std::move(values));
  return f;
}

const std::map<Key, double>& StatFn::table_values() const {
  if (kind_ != StatKind::Table || !table_) {
    throw ContractError("table_values() on a non-table statistic");
  }
  return *table_;
}

double StatFn::evaluate(double w) const {
  switch (kind_) {
    case StatKind::Sum:
      return w;
    case StatKind::Count:
      return w > 0.0 ? 1.0 : 0.0;
    case StatKind::Threshold:
      return w >= param_ ? 1.0 : 0.0;
    case StatKind::Cap:
      return w > 0.0 ? std::min(w, param_) : 0.0;
    case StatKind::Moment:
      return w > 0.0 ? std::pow(w, param_) : 0.0;
    case StatKind::Combo: {
      double v = 0.0;
      for (const auto& [a, part] : parts_) v += a * part.evaluate(w);
      return v;
    }
    case StatKind::Table:
      throw ContractError("table statistic requires a key; use value(key, w)");
  }
  return 0.0;
}

double StatFn::value(const Key& key, double w) const {
  switch (kind_) {
    case StatKind::Table: {
      auto it = table_->find(key);
      return it == table_->end() ? 0.0 : it->second;
    }
    case StatKind::Combo: {
      double v = 0.0;
      for (const auto& [a, part] : parts_) v += a * part.value(key, w);
      return v;
    }
    default:
      return evaluate(w);
  }
}

bool StatFn::weight_only() const {
  if (kind_ == StatKind::Table) return false;
  if (kind_ == StatKind::Combo) {
    for (const auto& [a, part] : parts_) {
      if (!part.weight_only()) return false;
    }
  }
  return true;
}

std::string StatFn::spec() const {
  switch (kind_) {
    case StatKind::Sum:
      return "sum";
    case StatKind::Count:
      return "count";
    case StatKind::Threshold:
      return "thresh:" + format_param(param_);
    case StatKind::Cap:
      return "cap:" + format_param(param_);
    case StatKind::Moment:
      return "moment:" + format_param(param_);
    case StatKind::Combo: {
      std::string s = "combo:[";
      bool first = true;
      for (const auto& [a, part] : parts_) {
        if (!first) s += ",";
        first = false;
        s += "(" + format_param(a) + "," + part.spec() + ")";
      }
      return s + "]";
    }
    case StatKind::Table:
      return "table:" + std::to_string(table_ ? table_->size() : 0);
  }
  return "";
}

bool StatFn::operator==(const StatFn& other) const {
  if (kind_ != other.kind_ || param_ != other.param_) return false;
  if (kind_ == StatKind::Combo) return parts_ == other.parts_;
  if (kind_ == StatKind::Table) {
    if (table_ == other.table_) return true;
    if (!table_ || !other.table_) return false;
    return *table_ == *other.table_;
  }
  return true;
}

namespace {

struct StatParser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw DataError("bad statistic spec '" + std::string(text) + "': " + why);
  }

  bool eat(char c) {
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  double number() {
    double v = 0.0;
    const char* first = text.data() + pos;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) fail("expected a number at offset " + std::to_string(pos));
    pos += static_cast<std::size_t>(ptr - first);
    return v;
  }

  std::string word() {
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '-' || text[pos] == '_')) {
      ++pos;
    }
    if (pos == start) fail("expected a statistic name at offset " + std::to_string(start));
    return std::string(text.substr(start, pos - start));
  }

  StatFn stat() {
    std::string name = word();
    if (name == "sum") return StatFn::sum();
    if (name == "count") return StatFn::count();
    if (name == "thresh") {
      if (!eat(':')) fail("thresh needs ':T'");
      return StatFn::threshold(number());
    }
    if (name == "cap") {
      if (!eat(':')) fail("cap needs ':T'");
      return StatFn::cap(number());
    }
    if (name == "moment") {
      if (!eat(':')) fail("moment needs ':p'");
      return StatFn::moment(number());
    }
    if (name == "combo") {
      if (!eat(':') || !eat('[')) fail("combo needs ':[(a,stat),...]'");
      std::vector<std::pair<double, StatFn>> parts;
      do {
        if (!eat('(')) fail("expected '(' at offset " + std::to_string(pos));
        double a = number();
        if (!eat(',')) fail("expected ',' after combo coefficient");
        StatFn part = stat();
        if (!eat(')')) fail("expected ')' at offset " + std::to_string(pos));
        parts.emplace_back(a, std::move(part));
      } while (eat(','));
      if (!eat(']')) fail("expected ']' at offset " + std::to_string(pos));
      return StatFn::combo(std::move(parts));
    }
    fail("unknown statistic '" + name + "'");
  }
};

}  // namespace

StatFn parse_stat(std::string_view spec) {
  StatParser p{spec};
  StatFn f = p.stat();
  if (p.pos != spec.size()) p.fail("trailing characters at offset " + std::to_string(p.pos));
  return f;
}

Segment Segment::all() { return Segment(); }

Segment Segment::keys(std::set<Key> keys) {
  Segment s;
  s.kind_ = Kind::Keys;
  s.keys_ = std::move(keys);
  return s;
}

Segment Segment::prefix(std::string prefix) {
  Segment s;
  s.kind_ = Kind::Prefix;
  s.prefix_ = std::move(prefix);
  return s;
}

bool Segment::contains(const Key& key) const {
  switch (kind_) {
    case Kind::All:
      return true;
    case Kind::Keys:
      return keys_.count(key) > 0;
    case Kind::Prefix:
      return key.compare(0, prefix_.size(), prefix_) == 0;
  }
  return false;
}

std::string Segment::describe() const {
  switch (kind_) {
    case Kind::All:
      return "all";
    case Kind::Keys:
      return "keys:" + std::to_string(keys_.size());
    case Kind::Prefix:
      return "prefix:" + prefix_;
  }
  return "";
}

double segment_sum_exact(const Dataset& data, const StatFn& f, const Segment& segment) {
  const Dataset* d = &data;
  Dataset owned;
  if (!data.aggregated) {
    owned = aggregate(data);
    d = &owned;
  }
  double sum = 0.0;
  for (const Element& e : d->elements) {
    if (segment.contains(e.key)) sum += f.value(e.key, e.weight);
  }
  return sum;
}

double disparity(const StatFn& f, const StatFn& g, const Dataset& data) {
  const Dataset* d = &data;
  Dataset owned;
  if (!data.aggregated) {
    owned = aggregate(data);
    d = &owned;
  }
  bool any = false;
  // Best ratios tracked as (numerator, denominator) pairs; comparisons are
  // cross-multiplied so no intermediate division happens.
  double fg_n = 0.0, fg_d = 0.0, gf_n = 0.0, gf_d = 0.0;
  for (const Element& e : d->elements) {
    double fv = f.value(e.key, e.weight);
    double gv = g.value(e.key, e.weight);
    if (fv == 0.0 && gv == 0.0) continue;
    if (fv == 0.0 || gv == 0.0) return kInf;
    if (!any) {
      any = true;
      fg_n = fv, fg_d = gv, gf_n = gv, gf_d = fv;
      continue;
    }
    if (static_cast<long double>(fv) * fg_d > static_cast<long double>(fg_n) * gv) {
      fg_n = fv, fg_d = gv;
    }
    if (static_cast<long double>(gv) * gf_d > static_cast<long double>(gf_n) * fv) {
      gf_n = gv, gf_d = fv;
    }
  }
  if (!any) return 1.0;
  return static_cast<double>((static_cast<long double>(fg_n) * gf_n) /
                             (static_cast<long double>(fg_d) * gf_d));
}

SupportCover support_covers(const StatFn& f, const StatFn& g) {
  if (!f.weight_only() || !g.weight_only()) return SupportCover::Unknown;
  SupportEdge fe = support_edge(f);
  SupportEdge ge = support_edge(g);
  if (fe.lb < ge.lb) return SupportCover::Covers;
  if (fe.lb == ge.lb && (fe.inclusive || !ge.inclusive)) return SupportCover::Covers;
  return SupportCover::Gap;
}

}  // namespace mosample
