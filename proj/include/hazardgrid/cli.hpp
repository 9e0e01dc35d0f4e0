#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hazardgrid {

/// Entry point of the `hazardgrid` tool. Returns 0 on success, 1 on a usage
/// error, 2 on a runtime failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hazardgrid
