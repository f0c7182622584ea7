#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "topicdet/error.hpp"

namespace topicdet::cli {

// Runs one `topicdet` invocation; `args` excludes the program name.
// Failures print a single "error[<category>]: <message>" line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// 2 usage, 3 io, 4 format, 5 data, 6 training.
int exit_code(ErrorCategory category) noexcept;

}  // namespace topicdet::cli
