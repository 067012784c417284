#pragma once

#include <stdexcept>
#include <string>

namespace mahler {

// Values double as CLI exit codes.
enum class ErrorCode {
  kInvalidArgument = 1,
  kHypothesis = 2,
  kDegenerate = 3,
  kNonConvergence = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace mahler
