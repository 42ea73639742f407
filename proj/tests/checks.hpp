#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Self-contained numerical checks shared by the acceptance and property runners.
namespace checks {

struct Result {
  std::string name;
  bool pass = false;
  std::string detail;
};

Result conservation_suite();
Result uncoupled_identity();
Result collapse_identity();

std::vector<Result> property_suite();

}  // namespace checks
