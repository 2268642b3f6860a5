#pragma once

#include <iosfwd>

namespace hybrid::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternal = 3 };

/// Entry point of the `hybridir` tool. Failures print one line to `err`:
///   error[<kind>]: <message>
/// with kind one of usage, parse, validation, io, data, internal.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hybrid::cli
