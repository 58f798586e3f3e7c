#pragma once

#include <stdexcept>
#include <string>

namespace leosim {

enum class ErrorCode {
  InvalidArgument,
  InvalidNode,
  Topology,
  DegeneratePath,
  DeadEnd,
  IndeterminateInput,
  UndefinedDelay,
  Config,
  Unreachable,
  Io,
};

// Every failure raised by the core carries one of the codes above; the C
// layer maps them onto leo_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace leosim
