#pragma once

#include <string>
#include <vector>

namespace bvlab {

// Runs one command line (without the program name) and returns the process
// exit code: 0 on success, 1 when a verified identity is breached, 2 on bad
// input. All seeds have fixed defaults, so runs are reproducible byte for
// byte unless the caller changes them.
int run_cli(const std::vector<std::string>& args);

}  // namespace bvlab
