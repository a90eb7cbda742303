#include <vector>

#include "mwpkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mwpkit::cli::run(args);
}
