#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eliminax::cli {

// Runs the command line given its arguments (without the program name).
// Output is buffered and written once, so identical configurations and
// seeds produce byte-identical output. Returns the exit status: 0 on
// success, 1 on validation failure, 2 on input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eliminax::cli
