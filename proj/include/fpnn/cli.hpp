#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace fpnn {

/// Entry point of the `fpnn` tool. `args` excludes the program name.
/// Returns 0 on success, 2 on usage errors and 1 on data or format errors.
int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fpnn
