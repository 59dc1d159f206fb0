#include <iostream>

#include "peakmodel_app/cli.hpp"

int main(int argc, char** argv) {
  return peakmodel::app::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
