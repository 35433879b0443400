#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tsnet::tools {

// Entry point of the `tsnet` executable. Returns the process exit code:
// 0 success, 1 input or analysis failure, 2 bad command line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Shortest round-trip decimal form, always with a decimal point or exponent
// ("1.0", "0.25", "1e-07").
std::string format_real(double v);

}  // namespace tsnet::tools
