#pragma once

#include <iosfwd>

namespace tracefn {

/// Runs the tracefn command line. Results go to `out` (or --out), diagnostics
/// to `err`. Returns 0 on success, 1 on a DomainError, 2 on configuration,
/// parsing or I/O errors.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tracefn
