#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto parsed = nsp::cli::parse_config(args, std::cout, std::cerr);
  if (!parsed.config) return parsed.exit_code;
  return nsp::cli::run(*parsed.config, std::cout, std::cerr);
}
