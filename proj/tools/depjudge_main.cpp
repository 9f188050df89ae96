#include <string>
#include <vector>

#include "depjudge/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return depjudge::run_cli(args);
}
