#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace topicdet {

// Coarse failure classes. The CLI maps each one to a single-line diagnostic
// prefix and an exit code.
enum class ErrorCategory {
  usage,     // bad arguments or configuration
  io,        // file missing or unreadable/unwritable
  format,    // malformed input record
  data,      // well-formed input that violates a data invariant
  training,  // numerical divergence during optimization
};

std::string_view to_string(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] void fail(ErrorCategory category, const std::string& message);

}  // namespace topicdet
