#pragma once

#include <stdexcept>
#include <string>

namespace sqleq {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that cannot be turned into a domain object: bad JSON, schema
/// violations, malformed files.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace sqleq
