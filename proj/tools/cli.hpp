#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opkit::cli {

enum ExitCode { kOk = 0, kInvalidInput = 2, kAxiomFailure = 3 };

/// Runs one command line (without the program name). Output goes to `out`,
/// one-line diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opkit::cli
