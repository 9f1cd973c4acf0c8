#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace osskg::cli {

/// Full command line without the program name. Returns the process exit
/// code: 0 on success, 2 for usage errors, 1 for everything else. Failures
/// print a single "error: <class>: <message>" line to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace osskg::cli
