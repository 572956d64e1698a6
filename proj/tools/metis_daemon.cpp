#include "metis/cli/daemon.hpp"

int
main(int argc, char** argv)
{
  return metis::daemonMain(std::vector<std::string>(argv, argv + argc));
}
