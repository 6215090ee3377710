#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ldm3n {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class UnknownId : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  using Error::Error;
};

class UnknownTriple : public Error {
 public:
  using Error::Error;
};

class UnknownProperty : public Error {
 public:
  using Error::Error;
};

class CapacityExhausted : public Error {
 public:
  using Error::Error;
};

class IoFailure : public Error {
 public:
  using Error::Error;
};

/// Store files exist but fail header or consistency checks.
class StoreCorrupt : public Error {
 public:
  using Error::Error;
};

class MalformedGraph : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace ldm3n
