#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nsvi {

/// Entry point behind main(): args excludes the program name. Returns the
/// process exit code: 0 on success with all checks passing, 1 when a bound
/// or equality check is violated, 2 on usage or I/O errors.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsvi
