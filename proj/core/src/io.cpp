#include "mosample/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include <json.hpp>

#include "mosample/errors.hpp"

namespace mosample {

namespace {

[[noreturn]] void line_error(const std::string& source, std::size_t line, const std::string& why) {
  throw DataError(source + ":" + std::to_string(line) + ": " + why);
}

double parse_weight(const std::string& source, std::size_t line, std::string_view text) {
  double w = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, w);
  if (ec != std::errc() || ptr != last) {
    line_error(source, line, "cannot parse weight '" + std::string(text) + "'");
  }
  return w;
}

Element parse_tsv_line(const std::string& line, const std::string& source, std::size_t line_no) {
  auto tab = line.find('\t');
  if (tab == std::string::npos) {
    line_error(source, line_no, "expected key<TAB>weight");
  }
  Element e;
  e.key = line.substr(0, tab);
  e.weight = parse_weight(source, line_no, std::string_view(line).substr(tab + 1));
  return e;
}

Element parse_json_line(const std::string& line, const std::string& source, std::size_t line_no) {
  nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    line_error(source, line_no, "not a JSON object");
  }
  if (!obj.contains("key") || !obj["key"].is_string()) {
    line_error(source, line_no, "missing string field 'key'");
  }
  if (!obj.contains("w") || !obj["w"].is_number()) {
    line_error(source, line_no, "missing numeric field 'w'");
  }
  return Element{obj["key"].get<std::string>(), obj["w"].get<double>()};
}

}  // namespace

InputFormat input_format_from_string(std::string_view s) {
  if (s == "tsv") return InputFormat::Tsv;
  if (s == "jsonl") return InputFormat::JsonLines;
  throw DataError("unknown input format: " + std::string(s));
}

void for_each_element(std::istream& in, InputFormat format, const std::string& source_name,
                      const std::function<void(const Element&)>& visit) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Element e = format == InputFormat::Tsv ? parse_tsv_line(line, source_name, line_no)
                                           : parse_json_line(line, source_name, line_no);
    if (e.key.empty()) line_error(source_name, line_no, "empty key");
    try {
      check_element(e);
    } catch (const DataError& err) {
      line_error(source_name, line_no, err.what());
    }
    visit(e);
  }
}

Dataset read_tsv(std::istream& in, const std::string& source_name) {
  return read_dataset(in, InputFormat::Tsv, source_name);
}

Dataset read_json_lines(std::istream& in, const std::string& source_name) {
  return read_dataset(in, InputFormat::JsonLines, source_name);
}

Dataset read_dataset(std::istream& in, InputFormat format, const std::string& source_name) {
  Dataset data;
  for_each_element(in, format, source_name,
                   [&data](const Element& e) { data.elements.push_back(e); });
  return data;
}

Dataset read_dataset_file(const std::string& path, InputFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file: " + path);
  return read_dataset(in, format, path);
}

}  // namespace mosample
