#include <string>
#include <vector>

#include "unison/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return unison::cli_main(args);
}
