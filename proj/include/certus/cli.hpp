#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace certus {

/// Runs the command line `certus <command> ...`; `args` excludes the program
/// name. Returns the exit status: 0 success, 1 findings or failed
/// assessment, 2 usage or document errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace certus
