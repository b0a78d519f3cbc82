#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gtfs2stn::gateway {

// Runs the command line (args excludes the program name). Returns the
// process exit code. Results without -o go to out, diagnostics to err.
int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace gtfs2stn::gateway
