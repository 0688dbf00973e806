#include "widthslab/cli_runner.hpp"

int main(int argc, char** argv) {
  return widthslab::run_cli({argv + 1, argv + argc});
}
