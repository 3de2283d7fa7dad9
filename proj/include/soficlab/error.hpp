#ifndef SOFICLAB_ERROR_HPP
#define SOFICLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace soficlab {

/// Raised for invalid input or a failed precondition. The message is meant
/// to be shown to the user verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an internal invariant fails. Seeing one of these is a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace soficlab

#endif
