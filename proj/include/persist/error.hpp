#pragma once

#include <stdexcept>
#include <string>

namespace persist {

/// Raised when input data violates an operation's preconditions
/// (empty series, zero variance, malformed CSV, ...).
class data_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed parameters or textual specifications.
class usage_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw data_error(what);
}

inline void require_arg(bool cond, const std::string& what) {
  if (!cond) throw usage_error(what);
}

}  // namespace detail
}  // namespace persist
