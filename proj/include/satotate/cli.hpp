#pragma once

// Batch command-line front end. Exit codes: 0 success, 2 validation error,
// 3 numeric failure, 4 insufficient data.

#include <iosfwd>
#include <string>
#include <vector>

namespace satotate {

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace satotate
