#pragma once

#include <string>
#include <vector>

namespace depjudge {

/// Runs one command (args exclude the program name). Returns the process
/// exit status: 0 on success, nonzero with a single-line diagnostic on
/// stderr otherwise. Identical args and input files produce byte-identical
/// output files.
int run_cli(const std::vector<std::string>& args);

}  // namespace depjudge
