#include <cstdlib>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const char* config = std::getenv("SYGMA_CONFIG");
  return kbqa::cli::run(args, std::cin, std::cout, std::cerr,
                        config ? std::optional<std::string>(config) : std::nullopt);
}
