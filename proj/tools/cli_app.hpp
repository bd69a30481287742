#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cazsl::cli {

// Full command-line entry point; argv-style arguments without the program
// name.  Returns the process exit code (0 ok, 1 usage, 2 data, 3 numeric).
int run_with_args(const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err);

}  // namespace cazsl::cli
