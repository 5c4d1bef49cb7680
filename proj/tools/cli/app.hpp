#pragma once

#include <ostream>

namespace cyberalloc::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitValidation = 2,
    kExitInternal = 3,
};

/// Entry point shared by main() and the tests. Reports go to out (or the
/// --out file), diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cyberalloc::cli
