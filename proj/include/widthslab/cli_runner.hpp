#pragma once

#include <string>
#include <vector>

namespace widthslab {

/// Entry point behind the widthslab binary: parses the argument list (sans
/// program name), dispatches to the compute / verify / sweep / oracle
/// commands, writes the requested outputs, and maps errors to exit codes:
/// 0 success, 1 verification failed, 2 malformed input, 3 budget exceeded,
/// 4 solver trouble.
int run_cli(const std::vector<std::string>& args);

}  // namespace widthslab
