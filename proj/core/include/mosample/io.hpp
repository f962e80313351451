#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "mosample/dataset.hpp"

namespace mosample {

enum class InputFormat { Tsv, JsonLines };

InputFormat input_format_from_string(std::string_view s);

// Streams elements to `visit` one line at a time without materializing the
// dataset; the whole-file readers below are built on this.
void for_each_element(std::istream& in, InputFormat format, const std::string& source_name,
                      const std::function<void(const Element&)>& visit);

// Reads "key<TAB>weight" lines. Blank lines are skipped; anything else that
// fails to parse raises DataError naming the 1-based line number.
Dataset read_tsv(std::istream& in, const std::string& source_name = "<input>");

// Reads one JSON object per line: {"key": "...", "w": <number>}.
Dataset read_json_lines(std::istream& in, const std::string& source_name = "<input>");

Dataset read_dataset(std::istream& in, InputFormat format,
                     const std::string& source_name = "<input>");

Dataset read_dataset_file(const std::string& path, InputFormat format);

}  // namespace mosample
