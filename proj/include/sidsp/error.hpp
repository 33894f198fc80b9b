#pragma once

#include <stdexcept>
#include <string>

namespace sidsp {

enum class Errc {
  ParseError,
  InvariantViolation,
  AlreadyPreprocessed,
  NotPreprocessed,
  EntryOutOfWindow,
  UnknownRequestId,
  DuplicateId,
  TooLarge,
  InfeasibleInput,
  BadArgument,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sidsp
