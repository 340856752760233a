#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wave3::cli {

// Runs one CLI command; writes the report (or the expr result line) to `out`
// unless --out redirects it, diagnostics to `err`. Returns the exit code:
// 0 pass, 1 fail, 2 usage or domain error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wave3::cli
