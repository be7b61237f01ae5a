#pragma once

#include <string>
#include <vector>

namespace qmlab::cli {

// Runs one command (`exponents`, `predict`, `quasimode`, `scaling`,
// `sphere`); `args` are the command-line arguments after the program name.
// Returns the process exit code:
//   0  success, all requested verifications passed
//   2  domain error (bad parameters, malformed config, CLI usage)
//   3  resolution or budget error
//   4  a verification failed its stated tolerance
//   1  unexpected internal failure
// Outputs are written only after all computation succeeds; a nonzero exit
// for codes 2 and 3 leaves no partial output files.
int run(const std::vector<std::string>& args);

}  // namespace qmlab::cli
