#include "qmlab/cli.hpp"

int main(int argc, char** argv) {
  return qmlab::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
