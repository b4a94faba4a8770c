#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace relcheck {

/// Runs one relcheck invocation; args exclude the program name. Returns the
/// process exit code: 0 pass, 1 fail, 2 usage or input error, 3 inconclusive.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relcheck
