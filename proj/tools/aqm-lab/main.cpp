#include <iostream>

#include "lab.hpp"

int main(int argc, char** argv) {
  return aqm::lab::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
