#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cartanlab {

/// Runs one command line (without the program name). The JSON run report goes
/// to out; usage messages go to err. Returns 0 on success, 2 when a check or
/// validation fails (the report is still written), 1 on usage errors.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cartanlab
