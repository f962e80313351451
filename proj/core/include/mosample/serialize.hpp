#pragma once

#include <string>
#include <variant>

#include "mosample/multi_sampler.hpp"
#include "mosample/single_sampler.hpp"
#include "mosample/universal_sampler.hpp"

namespace mosample {

inline constexpr int kSampleSchemaVersion = 1;

using AnySample = std::variant<PoissonSample, BottomKSample, MultiPpsSample, MultiBotkSample,
                               UniversalMonotoneSample, UniversalCappingSample>;

// File tag for each sample kind: "pps", "botk", "mo-pps", "mo-botk",
// "universal-monotone", "universal-capping".
std::string sample_kind_tag(const AnySample& s);

// Decimal text that parses back to the identical double: 17 significant
// digits, or "inf" for positive infinity.
std::string format_double(double v);

// Canonical JSON: fixed field order, records in their stored key-sorted
// order, numbers via format_double, the hash seed as a decimal string.
// Serializing a parsed file reproduces it byte for byte.
std::string serialize_sample(const AnySample& s);

// Rejects malformed JSON, unknown kinds and schema versions, and missing or
// mistyped fields, all as DataError.
AnySample parse_sample(const std::string& text);

// Statistic as text: StatFn::spec() strings for scalar kinds ("sum",
// "cap:5", ...),
// JSON ({"table":{...}} or {"combo":[[a,f],...]}) for the structural ones.
// stat_from_text accepts both forms; malformed input is a DataError.
std::string stat_to_text(const StatFn& f);
StatFn stat_from_text(const std::string& text);

}  // namespace mosample
