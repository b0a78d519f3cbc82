#include <iostream>

#include "gtfs2stn/gateway/cli.h"

int main(int argc, char** argv) {
  return gtfs2stn::gateway::run_cli({argv + 1, argv + argc}, std::cout,
                                    std::cerr);
}
