#pragma once

#include <string>
#include <vector>

namespace cdpp::cli {

struct DispatchResult {
  int exit_code = 0;
  std::string json;  // document printed on standard output
};

/// Runs one job described by an argument vector (without the program name).
/// On success: exit 0 and a JSON object with the result fields. On any domain
/// error: exit 1 and {"error": <code>, "message": ...}. Output is
/// deterministic given identical inputs and seed.
DispatchResult dispatch(const std::vector<std::string>& args);

}  // namespace cdpp::cli
