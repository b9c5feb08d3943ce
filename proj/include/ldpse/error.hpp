#pragma once

#include <stdexcept>
#include <string>

namespace ldpse {

// Raised when an input violates a documented precondition (bad config values,
// malformed files, dimension mismatches). Distinct from runtime failures so the
// CLI can map the two classes to different exit codes.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace ldpse
