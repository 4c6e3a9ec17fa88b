#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace torcor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (bad length, window too wide, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A computation would need more memory or work than the configured budget allows.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required, std::uint64_t available)
      : Error(what + ": requires " + std::to_string(required) + ", budget " +
              std::to_string(available)),
        required_(required),
        available_(available) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t available() const noexcept { return available_; }

 private:
  std::uint64_t required_;
  std::uint64_t available_;
};

/// Malformed input file; `offset` is the byte position where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace torcor
