#include <cstdio>
#include <string>
#include <vector>

#include "cdpp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  auto result = cdpp::cli::dispatch(args);
  std::fputs(result.json.c_str(), stdout);
  return result.exit_code;
}
