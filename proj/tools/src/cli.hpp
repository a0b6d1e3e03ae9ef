#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stabpair::cli {

/// Exit codes: 0 success, 1 negative verdict against --expect, 2 usage or
/// spec error, 3 runtime failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stabpair::cli
