#include "mosample/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <string_view>

#include <json.hpp>

#include "mosample/errors.hpp"

namespace mosample {

namespace {

using nlohmann::json;

void append_escaped(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void append_number(std::string& out, double v) {
  if (std::isinf(v) && v > 0.0) {
    out += "\"inf\"";
    return;
  }
  if (!std::isfinite(v)) throw ContractError("cannot serialize a non-finite value");
  out += format_double(v);
}

class Emitter {
 public:
  std::string take() && { return std::move(out_); }

  Emitter& raw(std::string_view s) {
    out_ += s;
    return *this;
  }
  Emitter& field(std::string_view name) {
    if (out_.back() != '{' && out_.back() != '[') out_ += ',';
    append_escaped(out_, name);
    out_ += ':';
    return *this;
  }
  Emitter& sep() {
    if (out_.back() != '{' && out_.back() != '[') out_ += ',';
    return *this;
  }
  Emitter& str(std::string_view s) {
    append_escaped(out_, s);
    return *this;
  }
  Emitter& num(double v) {
    append_number(out_, v);
    return *this;
  }
  Emitter& integer(std::int64_t v) {
    out_ += std::to_string(v);
    return *this;
  }
  Emitter& boolean(bool v) {
    out_ += v ? "true" : "false";
    return *this;
  }

 private:
  std::string out_;
};

void emit_stat(Emitter& e, const StatFn& f) {
  switch (f.kind()) {
    case StatKind::Table: {
      e.raw("{").field("table").raw("{");
      for (const auto& [key, value] : f.table_values()) {
        e.field(key).num(value);
      }
      e.raw("}}");
      return;
    }
    case StatKind::Combo: {
      e.raw("{").field("combo").raw("[");
      for (const auto& [a, part] : f.parts()) {
        e.sep().raw("[").num(a).raw(",");
        emit_stat(e, part);
        e.raw("]");
      }
      e.raw("]}");
      return;
    }
    default:
      e.str(f.spec());
  }
}

void emit_header(Emitter& e, std::string_view kind, const RandSource& rand) {
  e.raw("{")
      .field("schema_version")
      .integer(kSampleSchemaVersion)
      .field("kind")
      .str(kind)
      .field("hash_seed")
      .str(std::to_string(rand.hash_seed))
      .field("mode")
      .str(to_string(rand.mode));
}

void emit_objectives(Emitter& e, const std::vector<Objective>& objectives) {
  e.field("objectives").raw("[");
  for (const Objective& obj : objectives) {
    e.sep().raw("{").field("f");
    emit_stat(e, obj.f);
    e.field("k").integer(obj.k).raw("}");
  }
  e.raw("]");
}

void emit_numbers(Emitter& e, std::string_view name, const std::vector<double>& values) {
  e.field(name).raw("[");
  for (double v : values) e.sep().num(v);
  e.raw("]");
}

void emit_poisson_entries(Emitter& e, const std::vector<PoissonEntry>& entries) {
  e.field("entries").raw("[");
  for (const PoissonEntry& entry : entries) {
    e.sep()
        .raw("{")
        .field("key")
        .str(entry.key)
        .field("weight")
        .num(entry.weight)
        .field("u")
        .num(entry.u)
        .field("p")
        .num(entry.p)
        .raw("}");
  }
  e.raw("]");
}

void emit_aux(Emitter& e, const std::vector<AuxKey>& aux) {
  e.field("aux").raw("[");
  for (const AuxKey& a : aux) {
    e.sep()
        .raw("{")
        .field("key")
        .str(a.key)
        .field("weight")
        .num(a.weight)
        .field("u")
        .num(a.u)
        .raw("}");
  }
  e.raw("]");
}

void emit_botk_entry(Emitter& e, const BotkEntry& entry) {
  e.raw("{")
      .field("key")
      .str(entry.key)
      .field("weight")
      .num(entry.weight)
      .field("u")
      .num(entry.u)
      .field("seed")
      .num(entry.seed)
      .raw("}");
}

struct SerializeVisitor {
  Emitter e;

  std::string operator()(const PoissonSample& s) {
    emit_header(e, "pps", s.rand);
    e.field("f");
    emit_stat(e, s.f);
    e.field("k").integer(s.k).field("total").num(s.total);
    if (!s.total_tail.empty()) emit_numbers(e, "total_tail", s.total_tail);
    emit_poisson_entries(e, s.entries);
    e.raw("}");
    return std::move(e).take();
  }

  std::string operator()(const BottomKSample& s) {
    emit_header(e, "botk", s.rand);
    e.field("f");
    emit_stat(e, s.f);
    e.field("k").integer(s.k).field("entries").raw("[");
    for (const BotkEntry& entry : s.entries) {
      e.sep();
      emit_botk_entry(e, entry);
    }
    e.raw("]").field("boundary");
    if (s.boundary) {
      emit_botk_entry(e, *s.boundary);
    } else {
      e.raw("null");
    }
    e.raw("}");
    return std::move(e).take();
  }

  std::string operator()(const MultiPpsSample& s) {
    emit_header(e, "mo-pps", s.rand);
    emit_objectives(e, s.objectives);
    emit_numbers(e, "totals", s.totals);
    bool any_tail = false;
    for (const auto& tail : s.total_tails) any_tail = any_tail || !tail.empty();
    if (any_tail) {
      e.field("total_tails").raw("[");
      for (const auto& tail : s.total_tails) {
        e.sep().raw("[");
        for (double t : tail) e.sep().num(t);
        e.raw("]");
      }
      e.raw("]");
    }
    emit_poisson_entries(e, s.entries);
    e.field("warnings").raw("[");
    for (const std::string& w : s.warnings) e.sep().str(w);
    e.raw("]}");
    return std::move(e).take();
  }

  std::string operator()(const MultiBotkSample& s) {
    emit_header(e, "mo-botk", s.rand);
    emit_objectives(e, s.objectives);
    emit_poisson_entries(e, s.entries);
    emit_aux(e, s.aux);
    emit_numbers(e, "taus", s.taus);
    e.raw("}");
    return std::move(e).take();
  }

  std::string operator()(const UniversalMonotoneSample& s) {
    emit_header(e, "universal-monotone", s.rand);
    e.field("k").integer(s.k);
    emit_poisson_entries(e, s.entries);
    emit_aux(e, s.aux);
    e.field("weight_probability").raw("[");
    for (const auto& [w, p] : s.weight_probability) {
      e.sep().raw("[").num(w).raw(",").num(p).raw("]");
    }
    e.raw("]").field("n_processed").integer(s.n_processed).raw("}");
    return std::move(e).take();
  }

  std::string operator()(const UniversalCappingSample& s) {
    emit_header(e, "universal-capping", s.rand);
    e.field("k").integer(s.k).field("entries").raw("[");
    for (const CappingEntry& entry : s.entries) {
      e.sep()
          .raw("{")
          .field("key")
          .str(entry.key)
          .field("weight")
          .num(entry.weight)
          .field("u")
          .num(entry.u)
          .field("h")
          .integer(entry.h)
          .field("l")
          .integer(entry.l)
          .field("p")
          .num(entry.p)
          .raw("}");
    }
    e.raw("]").field("aux").raw("[");
    for (const CappingAux& a : s.aux) {
      e.sep()
          .raw("{")
          .field("key")
          .str(a.key)
          .field("weight")
          .num(a.weight)
          .field("u")
          .num(a.u)
          .field("h")
          .integer(a.h)
          .field("l")
          .integer(a.l)
          .field("needed")
          .boolean(a.needed)
          .raw("}");
    }
    e.raw("]}");
    return std::move(e).take();
  }
};

[[noreturn]] void bad(const std::string& why) { throw DataError("invalid sample file: " + why); }

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field '") + name + "'");
  return *it;
}

double get_number(const json& v, const char* what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && v.get<std::string>() == "inf") {
    return std::numeric_limits<double>::infinity();
  }
  bad(std::string("field '") + what + "' is not a number");
}

double get_number_field(const json& j, const char* name) {
  return get_number(field(j, name), name);
}

std::string get_string(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) bad(std::string("field '") + name + "' is not a string");
  return v.get<std::string>();
}

int get_int(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) bad(std::string("field '") + name + "' is not an integer");
  return v.get<int>();
}

const json& get_array(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_array()) bad(std::string("field '") + name + "' is not an array");
  return v;
}

StatFn parse_stat_json(const json& v) {
  if (v.is_string()) return parse_stat(v.get<std::string>());
  if (v.is_object()) {
    if (auto it = v.find("table"); it != v.end()) {
      if (!it->is_object()) bad("'table' is not an object");
      std::map<Key, double> values;
      for (const auto& [key, value] : it->items()) {
        values[key] = get_number(value, "table value");
      }
      return StatFn::table(std::move(values));
    }
    if (auto it = v.find("combo"); it != v.end()) {
      if (!it->is_array()) bad("'combo' is not an array");
      std::vector<std::pair<double, StatFn>> parts;
      for (const json& pair : *it) {
        if (!pair.is_array() || pair.size() != 2) bad("combo part is not a [weight, f] pair");
        parts.emplace_back(get_number(pair[0], "combo weight"), parse_stat_json(pair[1]));
      }
      return StatFn::combo(std::move(parts));
    }
  }
  bad("unrecognized statistic encoding");
}

RandSource parse_rand(const json& j) {
  RandSource rand;
  const std::string seed = get_string(j, "hash_seed");
  auto [ptr, ec] = std::from_chars(seed.data(), seed.data() + seed.size(), rand.hash_seed);
  if (ec != std::errc{} || ptr != seed.data() + seed.size()) {
    bad("hash_seed is not an unsigned decimal integer");
  }
  rand.mode = rank_mode_from_string(get_string(j, "mode"));
  return rand;
}

std::vector<Objective> parse_objectives(const json& j) {
  std::vector<Objective> objectives;
  for (const json& o : get_array(j, "objectives")) {
    Objective obj;
    obj.f = parse_stat_json(field(o, "f"));
    obj.k = get_int(o, "k");
    objectives.push_back(std::move(obj));
  }
  return objectives;
}

std::vector<double> parse_numbers(const json& j, const char* name) {
  std::vector<double> values;
  for (const json& v : get_array(j, name)) values.push_back(get_number(v, name));
  return values;
}

std::vector<PoissonEntry> parse_poisson_entries(const json& j) {
  std::vector<PoissonEntry> entries;
  for (const json& o : get_array(j, "entries")) {
    entries.push_back({get_string(o, "key"), get_number_field(o, "weight"),
                       get_number_field(o, "u"), get_number_field(o, "p")});
  }
  return entries;
}

std::vector<AuxKey> parse_aux(const json& j) {
  std::vector<AuxKey> aux;
  for (const json& o : get_array(j, "aux")) {
    aux.push_back({get_string(o, "key"), get_number_field(o, "weight"), get_number_field(o, "u")});
  }
  return aux;
}

BotkEntry parse_botk_entry(const json& o) {
  return {get_string(o, "key"), get_number_field(o, "weight"), get_number_field(o, "u"),
          get_number_field(o, "seed")};
}

AnySample parse_kind(const std::string& kind, const json& j) {
  if (kind == "pps") {
    PoissonSample s;
    s.rand = parse_rand(j);
    s.f = parse_stat_json(field(j, "f"));
    s.k = get_int(j, "k");
    s.total = get_number_field(j, "total");
    if (j.contains("total_tail")) s.total_tail = parse_numbers(j, "total_tail");
    s.entries = parse_poisson_entries(j);
    return s;
  }
  if (kind == "botk") {
    BottomKSample s;
    s.rand = parse_rand(j);
    s.f = parse_stat_json(field(j, "f"));
    s.k = get_int(j, "k");
    for (const json& o : get_array(j, "entries")) s.entries.push_back(parse_botk_entry(o));
    const json& boundary = field(j, "boundary");
    if (!boundary.is_null()) s.boundary = parse_botk_entry(boundary);
    return s;
  }
  if (kind == "mo-pps") {
    MultiPpsSample s;
    s.rand = parse_rand(j);
    s.objectives = parse_objectives(j);
    s.totals = parse_numbers(j, "totals");
    s.total_tails.resize(s.totals.size());
    if (j.contains("total_tails")) {
      const json& tails = get_array(j, "total_tails");
      if (tails.size() != s.totals.size()) bad("'total_tails' does not match 'totals'");
      for (std::size_t i = 0; i < s.total_tails.size(); ++i) {
        if (!tails[i].is_array()) bad("'total_tails' entry is not an array");
        for (const json& v : tails[i]) {
          s.total_tails[i].push_back(get_number(v, "total_tails"));
        }
      }
    }
    s.entries = parse_poisson_entries(j);
    for (const json& w : get_array(j, "warnings")) {
      if (!w.is_string()) bad("warning is not a string");
      s.warnings.push_back(w.get<std::string>());
    }
    return s;
  }
  if (kind == "mo-botk") {
    MultiBotkSample s;
    s.rand = parse_rand(j);
    s.objectives = parse_objectives(j);
    s.entries = parse_poisson_entries(j);
    s.aux = parse_aux(j);
    s.taus = parse_numbers(j, "taus");
    return s;
  }
  if (kind == "universal-monotone") {
    UniversalMonotoneSample s;
    s.rand = parse_rand(j);
    s.k = get_int(j, "k");
    s.entries = parse_poisson_entries(j);
    s.aux = parse_aux(j);
    for (const json& pair : get_array(j, "weight_probability")) {
      if (!pair.is_array() || pair.size() != 2) bad("weight_probability holds non-pairs");
      s.weight_probability[get_number(pair[0], "weight")] = get_number(pair[1], "probability");
    }
    const json& n = field(j, "n_processed");
    if (!n.is_number_integer()) bad("field 'n_processed' is not an integer");
    s.n_processed = n.get<std::int64_t>();
    return s;
  }
  if (kind == "universal-capping") {
    UniversalCappingSample s;
    s.rand = parse_rand(j);
    s.k = get_int(j, "k");
    for (const json& o : get_array(j, "entries")) {
      s.entries.push_back({get_string(o, "key"), get_number_field(o, "weight"),
                           get_number_field(o, "u"), get_int(o, "h"), get_int(o, "l"),
                           get_number_field(o, "p")});
    }
    for (const json& o : get_array(j, "aux")) {
      const json& needed = field(o, "needed");
      if (!needed.is_boolean()) bad("field 'needed' is not a boolean");
      s.aux.push_back({get_string(o, "key"), get_number_field(o, "weight"),
                       get_number_field(o, "u"), get_int(o, "h"), get_int(o, "l"),
                       needed.get<bool>()});
    }
    return s;
  }
  bad("unknown kind '" + kind + "'");
}

}  // namespace

std::string sample_kind_tag(const AnySample& s) {
  switch (s.index()) {
    case 0: return "pps";
    case 1: return "botk";
    case 2: return "mo-pps";
    case 3: return "mo-botk";
    case 4: return "universal-monotone";
    default: return "universal-capping";
  }
}

std::string format_double(double v) {
  if (std::isinf(v) && v > 0.0) return "inf";
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string serialize_sample(const AnySample& s) {
  return std::visit(SerializeVisitor{}, s);
}

std::string stat_to_text(const StatFn& f) {
  if (f.kind() != StatKind::Table && f.kind() != StatKind::Combo) return f.spec();
  Emitter e;
  emit_stat(e, f);
  return std::move(e).take();
}

StatFn stat_from_text(const std::string& text) {
  if (text.empty() || text.front() != '{') return parse_stat(text);
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad statistic '" + text + "': " + e.what());
  }
  return parse_stat_json(j);
}

AnySample parse_sample(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
  if (!j.is_object()) bad("top level is not an object");
  const int version = get_int(j, "schema_version");
  if (version != kSampleSchemaVersion) {
    bad("unsupported schema_version " + std::to_string(version));
  }
  return parse_kind(get_string(j, "kind"), j);
}

}  // namespace mosample
