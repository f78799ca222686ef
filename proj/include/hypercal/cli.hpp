#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypercal {

// Entry point shared by the binary and the tests. Prints one JSON report to
// `out`, a short human summary to `err`.
// Exit codes: 0 pass, 1 property/validation failure, 2 expectation mismatch,
// 3 parse/IO error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hypercal
