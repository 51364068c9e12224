#pragma once

#include <stdexcept>
#include <string>

namespace wmp {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A mode index does not fit in the truncated basis, or the doubling test
// showed that the basis is too small for the requested coupling.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class OrthogonalSelectionError : public Error {
 public:
  using Error::Error;
};

class ClassViolationError : public Error {
 public:
  using Error::Error;
};

class DegenerateNormalizationError : public Error {
 public:
  using Error::Error;
};

class SeriesBudgetError : public Error {
 public:
  using Error::Error;
};

class DegeneratePointerError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wmp
