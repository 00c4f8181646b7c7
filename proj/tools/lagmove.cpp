#include <string>
#include <vector>

#include "lagmove/cli.hpp"

int main(int argc, char** argv) {
  return lagmove::cli::main_entry(std::vector<std::string>(argv + 1, argv + argc));
}
