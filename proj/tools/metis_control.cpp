#include "metis/cli/control.hpp"

#include <iostream>

int
main(int argc, char** argv)
{
  return metis::controlMain(std::vector<std::string>(argv, argv + argc), std::cin, std::cout,
                            std::cerr);
}
