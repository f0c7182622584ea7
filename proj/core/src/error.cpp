#include "topicdet/error.hpp"

namespace topicdet {

std::string_view to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::usage:
      return "usage";
    case ErrorCategory::io:
      return "io";
    case ErrorCategory::format:
      return "format";
    case ErrorCategory::data:
      return "data";
    case ErrorCategory::training:
      return "training";
  }
  return "unknown";
}

void fail(ErrorCategory category, const std::string& message) {
  throw Error(category, message);
}

}  // namespace topicdet
