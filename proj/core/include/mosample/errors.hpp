#pragma once

#include <stdexcept>
#include <string>

namespace mosample {

// Malformed or inconsistent input data (bad lines, duplicate keys, negative
// weights). CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A caller or callback broke an API precondition (mismatched sample
// parameters, invalid upper bounds, solver contract violations). CLI maps
// this to exit code 3.
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mosample
