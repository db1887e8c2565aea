#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace x4::cli {

enum ExitCode { ok = 0, invalid_input = 1, rejected = 2, not_converged = 3 };

// args excludes the program name
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace x4::cli
