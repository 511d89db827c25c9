#pragma once

#include <iosfwd>

namespace carve {

/// Entry point of the `carve` command-line tool. Exit codes: 0 success,
/// 1 usage error, 2 data error. Diagnostics go to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace carve
