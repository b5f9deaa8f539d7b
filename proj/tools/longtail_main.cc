#include <string>
#include <vector>

#include "longtail/cli.h"

int main(int argc, char** argv) {
  return longtail::RunCli(std::vector<std::string>(argv, argv + argc));
}
