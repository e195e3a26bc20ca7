#include <iostream>

#include "confgeo/driver.hpp"

int main(int argc, char** argv) {
  return confgeo::run_check(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
