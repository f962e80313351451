// Command-line front end: sample datasets, merge sample files, estimate
// segment sums, probe inclusion probabilities, run variance-bound trials,
// and optimize over a candidate family. JSON goes to stdout, diagnostics to
// stderr. Exit codes: 0 ok, 1 usage, 2 bad data, 3 contract violation.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mosample/errors.hpp"
#include "mosample/estimator.hpp"
#include "mosample/io.hpp"
#include "mosample/multi_sampler.hpp"
#include "mosample/optimizer.hpp"
#include "mosample/quality.hpp"
#include "mosample/serialize.hpp"
#include "mosample/single_sampler.hpp"
#include "mosample/universal_sampler.hpp"

namespace {

using namespace mosample;
using nlohmann::json;

std::uint64_t parse_seed_text(const std::string& text, const std::string& what) {
  std::uint64_t seed = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError(what + " is not an unsigned decimal integer: '" + text + "'");
  }
  return seed;
}

std::uint64_t resolve_seed(const std::optional<std::string>& flag) {
  if (flag) return parse_seed_text(*flag, "--seed");
  if (const char* env = std::getenv("MOSAMPLE_SEED")) {
    return parse_seed_text(env, "MOSAMPLE_SEED");
  }
  return 0;
}

Dataset read_inputs(const std::vector<std::string>& paths, InputFormat format) {
  Dataset data;
  for (const std::string& path : paths) {
    Dataset part = read_dataset_file(path, format);
    data.elements.insert(data.elements.end(), part.elements.begin(), part.elements.end());
  }
  return data;
}

Segment parse_segment(const std::string& text) {
  if (text == "all") return Segment::all();
  if (text.starts_with("prefix:")) return Segment::prefix(text.substr(7));
  if (text.starts_with("keys:")) {
    std::set<Key> keys;
    std::stringstream ss(text.substr(5));
    std::string key;
    while (std::getline(ss, key, ',')) {
      if (!key.empty()) keys.insert(key);
    }
    if (keys.empty()) throw DataError("empty key list in segment '" + text + "'");
    return Segment::keys(std::move(keys));
  }
  throw DataError("bad segment '" + text + "'; expected all, prefix:P, or keys:a,b,c");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw DataError("cannot open output file: " + out_path);
  out << text << "\n";
}

// Options shared by `sample` and `probe`.
struct SampleArgs {
  std::vector<std::string> inputs;
  std::string format = "tsv";
  std::string kind;
  std::vector<std::string> stats;
  std::vector<int> ks;
  std::optional<std::string> seed;
  std::string mode = "ppswor";
  int shards = 1;
};

void add_sample_options(CLI::App* cmd, SampleArgs& args, bool with_shards) {
  cmd->add_option("--input", args.inputs, "input dataset file(s)")->required();
  cmd->add_option("--format", args.format, "input format: tsv or jsonl");
  cmd->add_option("--kind", args.kind,
                  "pps | botk | mo-pps | mo-botk | universal-monotone | universal-capping")
      ->required();
  cmd->add_option("--stat", args.stats, "objective statistic(s), e.g. sum or cap:5");
  cmd->add_option("--k", args.ks, "size parameter(s); one per --stat or one for all")
      ->required();
  cmd->add_option("--seed", args.seed, "hash seed (default: MOSAMPLE_SEED or 0)");
  cmd->add_option("--mode", args.mode, "rank mode: ppswor or priority");
  if (with_shards) {
    cmd->add_option("--shards", args.shards, "split input by key hash and merge the pieces")
        ->check(CLI::Range(1, 1024));
  }
}

struct SamplePlan {
  std::string kind;
  StatFn f;                           // single-objective kinds
  std::vector<Objective> objectives;  // multi-objective kinds
  int k = 1;
  RandSource rand;
};

SamplePlan make_plan(const SampleArgs& args) {
  SamplePlan plan;
  plan.kind = args.kind;
  plan.rand = {resolve_seed(args.seed), rank_mode_from_string(args.mode)};
  for (int k : args.ks) {
    if (k < 1) throw DataError("--k must be at least 1");
  }

  const bool multi = args.kind == "mo-pps" || args.kind == "mo-botk";
  const bool universal = args.kind == "universal-monotone" || args.kind == "universal-capping";
  const bool single = args.kind == "pps" || args.kind == "botk";
  if (!multi && !universal && !single) throw DataError("unknown kind '" + args.kind + "'");

  if (universal) {
    if (!args.stats.empty()) {
      throw DataError("--stat does not apply to universal kinds; they serve all statistics");
    }
    if (args.ks.size() != 1) throw DataError("universal kinds take exactly one --k");
    plan.k = args.ks[0];
    return plan;
  }
  if (single) {
    if (args.stats.size() != 1) throw DataError(args.kind + " takes exactly one --stat");
    if (args.ks.size() != 1) throw DataError(args.kind + " takes exactly one --k");
    plan.f = stat_from_text(args.stats[0]);
    plan.k = args.ks[0];
    return plan;
  }
  if (args.stats.empty()) throw DataError(args.kind + " needs at least one --stat");
  if (args.ks.size() != 1 && args.ks.size() != args.stats.size()) {
    throw DataError("give one --k per --stat, or a single --k for all");
  }
  for (std::size_t i = 0; i < args.stats.size(); ++i) {
    const int k = args.ks.size() == 1 ? args.ks[0] : args.ks[i];
    plan.objectives.push_back({stat_from_text(args.stats[i]), k});
  }
  return plan;
}

AnySample build_sample(const SamplePlan& plan, const Dataset& data) {
  if (plan.kind == "pps") {
    if (data.elements.empty()) {
      PoissonSample s;
      s.f = plan.f;
      s.k = plan.k;
      s.rand = plan.rand;
      return s;
    }
    return pps_build(data, plan.f, plan.k, plan.rand);
  }
  if (plan.kind == "botk") return botk_build(data, plan.f, plan.k, plan.rand);
  if (plan.kind == "mo-pps") return mo_pps_build(data, plan.objectives, plan.rand);
  if (plan.kind == "mo-botk") return mo_botk_build(data, plan.objectives, plan.rand);
  if (plan.kind == "universal-monotone") {
    return universal_monotone_by_weight(data, plan.k, plan.rand);
  }
  return universal_capping_build(data, plan.k, plan.rand);
}

// Bottom-k kinds hold O(k) state, so they read elements straight off the
// stream instead of materializing the dataset.
AnySample build_streaming(const SamplePlan& plan, const std::vector<std::string>& paths,
                          InputFormat format) {
  if (plan.kind == "botk") {
    BottomKBuilder builder(plan.f, plan.k, plan.rand);
    for (const std::string& path : paths) {
      std::ifstream in(path);
      if (!in) throw DataError("cannot open input file: " + path);
      for_each_element(in, format, path, [&builder](const Element& e) { builder.offer(e); });
    }
    return builder.finish();
  }
  MultiBotkBuilder builder(plan.objectives, plan.rand);
  for (const std::string& path : paths) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);
    for_each_element(in, format, path, [&builder](const Element& e) { builder.offer(e); });
  }
  return builder.finish();
}

AnySample merge_pair(const AnySample& a, const AnySample& b) {
  if (a.index() != b.index()) {
    throw DataError("cannot merge a '" + sample_kind_tag(a) + "' sample with a '" +
                    sample_kind_tag(b) + "' sample");
  }
  return std::visit(
      [&b](const auto& lhs) -> AnySample {
        using T = std::decay_t<decltype(lhs)>;
        const T& rhs = std::get<T>(b);
        if constexpr (std::is_same_v<T, PoissonSample>) return pps_merge(lhs, rhs);
        if constexpr (std::is_same_v<T, BottomKSample>) return botk_merge(lhs, rhs);
        if constexpr (std::is_same_v<T, MultiPpsSample>) return mo_pps_merge(lhs, rhs);
        if constexpr (std::is_same_v<T, MultiBotkSample>) return mo_botk_merge(lhs, rhs);
        if constexpr (std::is_same_v<T, UniversalMonotoneSample>) {
          return universal_monotone_merge(lhs, rhs);
        }
        if constexpr (std::is_same_v<T, UniversalCappingSample>) {
          return universal_capping_merge(lhs, rhs);
        }
      },
      a);
}

AnySample build_sharded(const SamplePlan& plan, const Dataset& data, int shards) {
  const std::uint64_t salt = derive_seed(plan.rand.hash_seed, 77701);
  std::vector<Dataset> parts(static_cast<std::size_t>(shards));
  for (const Element& e : data.elements) {
    parts[keyed_hash(salt, e.key) % static_cast<std::uint64_t>(shards)].elements.push_back(e);
  }
  std::optional<AnySample> merged;
  for (const Dataset& part : parts) {
    AnySample piece = build_sample(plan, part);
    merged = merged ? merge_pair(*merged, piece) : std::move(piece);
  }
  AnySample whole = build_sample(plan, data);
  if (!(serialize_sample(*merged) == serialize_sample(whole))) {
    throw ContractError("sharded merge disagrees with one-shot sampling");
  }
  return whole;
}

struct SampleSummary {
  std::size_t entries = 0;
  std::size_t aux = 0;
  double mean_k = 0.0;
  bool multi = false;
};

SampleSummary summarize(const AnySample& s) {
  SampleSummary out;
  std::visit(
      [&out](const auto& sample) {
        using T = std::decay_t<decltype(sample)>;
        out.entries = sample.entries.size();
        if constexpr (std::is_same_v<T, MultiPpsSample> || std::is_same_v<T, MultiBotkSample>) {
          out.multi = true;
          for (const Objective& obj : sample.objectives) out.mean_k += obj.k;
          out.mean_k /= static_cast<double>(sample.objectives.size());
        }
        if constexpr (std::is_same_v<T, MultiBotkSample> ||
                      std::is_same_v<T, UniversalMonotoneSample> ||
                      std::is_same_v<T, UniversalCappingSample>) {
          out.aux = sample.aux.size();
        }
      },
      s);
  return out;
}

int cmd_sample(const SampleArgs& args, const std::string& out_path) {
  const SamplePlan plan = make_plan(args);
  const InputFormat format = input_format_from_string(args.format);

  AnySample sample = [&] {
    if (args.shards > 1) {
      return build_sharded(plan, read_inputs(args.inputs, format), args.shards);
    }
    if (plan.kind == "botk" || plan.kind == "mo-botk") {
      return build_streaming(plan, args.inputs, format);
    }
    return build_sample(plan, read_inputs(args.inputs, format));
  }();

  write_output(serialize_sample(sample), out_path);

  const SampleSummary summary = summarize(sample);
  std::cerr << "sampled " << summary.entries << " key(s)";
  if (summary.aux > 0) std::cerr << " + " << summary.aux << " auxiliary";
  if (summary.multi && summary.mean_k > 0.0) {
    std::cerr << "; overhead " << static_cast<double>(summary.entries) / summary.mean_k
              << " per unit of size parameter";
  }
  std::cerr << "\n";
  return 0;
}

int cmd_merge(const std::vector<std::string>& paths, const std::string& out_path) {
  std::optional<AnySample> merged;
  for (const std::string& path : paths) {
    AnySample piece = parse_sample(read_text_file(path));
    merged = merged ? merge_pair(*merged, piece) : std::move(piece);
  }
  write_output(serialize_sample(*merged), out_path);
  return 0;
}

json result_to_json(const EstimateResult& r) {
  json j;
  j["estimate"] = r.value;
  j["keys_used"] = r.contributing_keys;
  j["sample_kind"] = r.sample_kind;
  j["warnings"] = r.warnings;
  return j;
}

int cmd_estimate(const std::string& sample_path, const std::string& g_text,
                 const std::string& segment_text, const std::string& data_path,
                 const std::string& format_text) {
  const AnySample sample = parse_sample(read_text_file(sample_path));
  const StatFn g = stat_from_text(g_text);
  const Segment segment = parse_segment(segment_text);

  const EstimateResult result = std::visit(
      [&](const auto& s) { return estimate_segment_sum(s, g, segment); }, sample);
  json out = result_to_json(result);

  if (!data_path.empty()) {
    const Dataset data = read_dataset_file(data_path, input_format_from_string(format_text));
    const SupportGap gap = std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PoissonSample> || std::is_same_v<T, BottomKSample>) {
            return support_gap(data, s.f, g, segment);
          } else if constexpr (std::is_same_v<T, MultiPpsSample> ||
                               std::is_same_v<T, MultiBotkSample>) {
            return support_gap(data, s.objectives, g, segment);
          } else {
            // Universal samples reach every key of positive weight.
            return support_gap(data, StatFn::sum(), g, segment);
          }
        },
        sample);
    out["support_gap"] = {{"affected_keys", gap.affected_keys},
                          {"missing_sum", gap.missing_sum}};
  }

  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_probe(const SampleArgs& args, const std::vector<std::string>& only_keys) {
  const SamplePlan plan = make_plan(args);
  const Dataset data = read_inputs(args.inputs, input_format_from_string(args.format));
  const AnySample sample = build_sample(plan, data);
  const std::set<Key> filter(only_keys.begin(), only_keys.end());
  const auto wanted = [&filter](const Key& key) { return filter.empty() || filter.count(key); };

  json rows = json::array();
  json extra;
  if (const auto* pps = std::get_if<PoissonSample>(&sample)) {
    for (const Element& e : data.elements) {
      if (!wanted(e.key)) continue;
      const double v = plan.f.value(e.key, e.weight);
      rows.push_back({{"key", e.key},
                      {"weight", e.weight},
                      {"p", pps_probability(v, plan.k, pps->total)}});
    }
  } else if (const auto* mo = std::get_if<MultiPpsSample>(&sample)) {
    for (const Element& e : data.elements) {
      if (!wanted(e.key)) continue;
      rows.push_back({{"key", e.key},
                      {"weight", e.weight},
                      {"p", mo_pps_probability(mo->objectives, mo->totals, e.key, e.weight)}});
    }
  } else if (const auto* botk = std::get_if<BottomKSample>(&sample)) {
    for (const BotkEntry& e : botk->entries) {
      if (!wanted(e.key)) continue;
      rows.push_back({{"key", e.key},
                      {"weight", e.weight},
                      {"p", botk_conditional_probability(*botk, e.key, e.weight)}});
    }
    extra["tau"] = format_double(botk->tau());
  } else if (const auto* mob = std::get_if<MultiBotkSample>(&sample)) {
    for (const PoissonEntry& e : mob->entries) {
      if (!wanted(e.key)) continue;
      rows.push_back({{"key", e.key}, {"weight", e.weight}, {"p", e.p}});
    }
    json taus = json::array();
    for (double tau : mob->taus) taus.push_back(format_double(tau));
    extra["taus"] = taus;
  } else if (const auto* mono = std::get_if<UniversalMonotoneSample>(&sample)) {
    for (const PoissonEntry& e : mono->entries) {
      if (!wanted(e.key)) continue;
      rows.push_back({{"key", e.key}, {"weight", e.weight}, {"p", e.p}});
    }
    json pw = json::array();
    for (const auto& [w, p] : mono->weight_probability) pw.push_back({w, p});
    extra["weight_probability"] = pw;
  } else {
    const auto& cap = std::get<UniversalCappingSample>(sample);
    for (const CappingEntry& e : cap.entries) {
      if (!wanted(e.key)) continue;
      rows.push_back({{"key", e.key}, {"weight", e.weight}, {"p", e.p}});
    }
  }

  json out;
  out["kind"] = sample_kind_tag(sample);
  out["probabilities"] = rows;
  for (auto& [key, value] : extra.items()) out[key] = value;
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_bench(const std::string& input, const std::string& format_text, const std::string& kind,
              const std::string& f_text, const std::string& g_text, int k, int trials,
              const std::optional<std::string>& seed, const std::string& mode,
              const std::string& segment_text, const std::vector<double>& deltas) {
  const Dataset data = read_dataset_file(input, input_format_from_string(format_text));
  SamplerConfig config;
  config.f = stat_from_text(f_text);
  config.k = k;
  if (kind == "pps") {
    config.kind = SamplerKind::Pps;
  } else if (kind == "botk") {
    config.kind = rank_mode_from_string(mode) == RankMode::Priority ? SamplerKind::BotkPriority
                                                                    : SamplerKind::BotkPpswor;
  } else {
    throw DataError("bench kinds are pps and botk, not '" + kind + "'");
  }
  const StatFn g = stat_from_text(g_text);
  const Segment segment = parse_segment(segment_text);
  const std::uint64_t base_seed = resolve_seed(seed);

  json out;
  out["sampler"] = to_string(config.kind);
  bool pass = true;
  if (deltas.empty()) {
    const TrialReport report = run_cv_trial(data, config, g, segment, trials, base_seed);
    pass = report.empirical_cv <= report.bound_cv;
    out["trials"] = report.trials;
    out["true_value"] = report.true_value;
    out["empirical_mean"] = report.empirical_mean;
    out["empirical_cv"] = report.empirical_cv;
    out["bound_cv"] = std::isinf(report.bound_cv) ? json("inf") : json(report.bound_cv);
    out["notes"] = report.notes;
  } else {
    const TrialReport report =
        run_concentration_trial(data, config, g, segment, deltas, trials, base_seed);
    json checks = json::array();
    for (const auto& [delta, count] : report.exceedance_counts) {
      const double rate = static_cast<double>(count) / report.trials;
      const double bound =
          std::min(1.0, concentration_bound(data, config, g, segment, delta));
      checks.push_back({{"delta", delta}, {"rate", rate}, {"bound", bound}});
      if (rate > bound) pass = false;
    }
    out["trials"] = report.trials;
    out["true_value"] = report.true_value;
    out["exceedance"] = checks;
    out["notes"] = report.notes;
  }
  out["pass"] = pass;
  std::cout << out.dump() << "\n";
  return 0;
}

std::map<Key, double> read_key_value_file(const std::string& path, InputFormat format) {
  const Dataset data = read_dataset_file(path, format);
  std::map<Key, double> values;
  for (const Element& e : data.elements) values[e.key] = e.weight;
  return values;
}

int cmd_optimize(const std::string& data_path, const std::string& format_text,
                 const std::string& candidates_path, const std::string& weights_path,
                 const std::string& pi_path, const std::string& m_text, double eps,
                 const std::string& certify_text, const std::optional<std::string>& seed,
                 const std::string& mode, bool test_on_sums) {
  const InputFormat format = input_format_from_string(format_text);
  OptimizationProblem problem;
  problem.data = read_dataset_file(data_path, format);
  problem.M = parse_outer_fn(m_text);
  problem.epsilon = eps;
  problem.rand = {resolve_seed(seed), rank_mode_from_string(mode)};
  problem.validation_seed = derive_seed(problem.rand.hash_seed, 0xfeed);
  problem.test_on_sums = test_on_sums;
  if (certify_text == "exact") {
    problem.certify = CertifyMode::Exact;
  } else if (certify_text == "sample") {
    problem.certify = CertifyMode::ValidationSample;
  } else {
    throw DataError("--certify must be exact or sample, not '" + certify_text + "'");
  }
  if (!weights_path.empty()) problem.importance = read_key_value_file(weights_path, format);
  if (!pi_path.empty()) problem.pi = read_key_value_file(pi_path, format);

  std::ifstream in(candidates_path);
  if (!in) throw DataError("cannot open candidates file: " + candidates_path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    try {
      problem.family.push_back(stat_from_text(line));
    } catch (const DataError& e) {
      throw DataError(candidates_path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }

  const OptimizeResult r = optimize(problem);
  json history = json::array();
  for (const IterationRecord& rec : r.history) {
    history.push_back({{"k", rec.k},
                       {"sample_size", rec.sample_size},
                       {"best_index", rec.best_index},
                       {"sample_sum", rec.sample_sum},
                       {"sample_value", rec.sample_value},
                       {"reference_sum", rec.reference_sum},
                       {"reference_value", rec.reference_value},
                       {"certified", rec.certified},
                       {"lower_bound", rec.lower_bound},
                       {"upper_bound", rec.upper_bound},
                       {"failure_probability", rec.failure_probability}});
  }
  json out;
  out["best_index"] = r.best_index;
  out["best"] = stat_to_text(problem.family[static_cast<std::size_t>(r.best_index)]);
  out["sample_sum"] = r.sample_sum;
  out["sample_value"] = r.sample_value;
  out["reference_sum"] = r.reference_sum;
  out["reference_value"] = r.reference_value;
  out["iterations"] = r.iterations;
  out["final_k"] = r.final_k;
  out["history"] = history;
  out["notes"] = r.notes;
  std::cout << out.dump() << "\n";
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"multi-objective weighted sampling"};
  app.require_subcommand(1);

  SampleArgs sample_args;
  std::string sample_out;
  CLI::App* sample = app.add_subcommand("sample", "draw a sample and write it as JSON");
  add_sample_options(sample, sample_args, true);
  sample->add_option("--out", sample_out, "output file (default: stdout)");

  std::vector<std::string> merge_paths;
  std::string merge_out;
  CLI::App* merge = app.add_subcommand("merge", "merge sample files from disjoint data shards");
  merge->add_option("files", merge_paths, "sample files")->required()->expected(-1);
  merge->add_option("--out", merge_out, "output file (default: stdout)");

  std::string est_sample, est_g, est_segment = "all", est_data, est_format = "tsv";
  CLI::App* estimate = app.add_subcommand("estimate", "estimate a segment sum from a sample");
  estimate->add_option("--sample", est_sample, "sample file")->required();
  estimate->add_option("--g", est_g, "statistic to estimate")->required();
  estimate->add_option("--segment", est_segment, "all | prefix:P | keys:a,b,c");
  estimate->add_option("--data", est_data, "full dataset for support-gap accounting");
  estimate->add_option("--format", est_format, "format of --data: tsv or jsonl");

  SampleArgs probe_args;
  std::vector<std::string> probe_keys;
  CLI::App* probe = app.add_subcommand("probe", "report per-key inclusion probabilities");
  add_sample_options(probe, probe_args, false);
  probe->add_option("--key", probe_keys, "restrict output to these keys");

  std::string bench_input, bench_format = "tsv", bench_kind, bench_f, bench_g = "";
  std::string bench_segment = "all", bench_mode = "ppswor";
  int bench_k = 0, bench_trials = 0;
  std::optional<std::string> bench_seed;
  std::vector<double> bench_deltas;
  CLI::App* bench = app.add_subcommand("bench", "Monte Carlo check of the variance guarantee");
  bench->add_option("--input", bench_input, "dataset file")->required();
  bench->add_option("--format", bench_format, "tsv or jsonl");
  bench->add_option("--kind", bench_kind, "pps or botk")->required();
  bench->add_option("--f", bench_f, "sampling statistic")->required();
  bench->add_option("--g", bench_g, "estimated statistic (default: same as --f)");
  bench->add_option("--k", bench_k, "size parameter")->required();
  bench->add_option("--trials", bench_trials, "number of Monte Carlo trials")->required();
  bench->add_option("--seed", bench_seed, "base seed (default: MOSAMPLE_SEED or 0)");
  bench->add_option("--mode", bench_mode, "rank mode for botk");
  bench->add_option("--segment", bench_segment, "all | prefix:P | keys:a,b,c");
  bench->add_option("--delta", bench_deltas, "check tail rates at these relative errors");

  std::string opt_data, opt_format = "tsv", opt_candidates, opt_weights, opt_pi;
  std::string opt_m = "identity", opt_certify = "exact", opt_mode = "ppswor";
  double opt_eps = 0.1;
  std::optional<std::string> opt_seed;
  bool opt_sums = false;
  CLI::App* opt = app.add_subcommand("optimize", "pick the candidate with the largest sum");
  opt->add_option("--data", opt_data, "dataset file")->required();
  opt->add_option("--format", opt_format, "tsv or jsonl");
  opt->add_option("--candidates", opt_candidates, "file with one statistic per line")->required();
  opt->add_option("--weights", opt_weights, "per-key importance file (key<TAB>m)");
  opt->add_option("--pi", opt_pi, "per-key probability upper bounds (key<TAB>pi)");
  opt->add_option("--M", opt_m, "outer function: identity or negate-shift:C");
  opt->add_option("--eps", opt_eps, "relative accuracy in (0,1)");
  opt->add_option("--certify", opt_certify, "exact or sample");
  opt->add_option("--seed", opt_seed, "hash seed (default: MOSAMPLE_SEED or 0)");
  opt->add_option("--mode", opt_mode, "rank mode");
  opt->add_flag("--test-on-sums", opt_sums, "run the acceptance test on raw sums");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (sample->parsed()) return cmd_sample(sample_args, sample_out);
  if (merge->parsed()) return cmd_merge(merge_paths, merge_out);
  if (estimate->parsed()) {
    return cmd_estimate(est_sample, est_g, est_segment, est_data, est_format);
  }
  if (probe->parsed()) return cmd_probe(probe_args, probe_keys);
  if (bench->parsed()) {
    return cmd_bench(bench_input, bench_format, bench_kind, bench_f,
                     bench_g.empty() ? bench_f : bench_g, bench_k, bench_trials, bench_seed,
                     bench_mode, bench_segment, bench_deltas);
  }
  return cmd_optimize(opt_data, opt_format, opt_candidates, opt_weights, opt_pi, opt_m, opt_eps,
                      opt_certify, opt_seed, opt_mode, opt_sums);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const mosample::ContractError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 3;
  } catch (const mosample::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
