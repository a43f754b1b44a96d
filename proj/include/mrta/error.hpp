#pragma once

#include <stdexcept>
#include <string>

namespace mrta {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument is outside its admissible domain (e.g. a non-positive speed).
class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// A scenario or plan document failed validation. The message names the offending field.
class LoadError : public Error {
public:
  explicit LoadError(const std::string& field, const std::string& what)
      : Error("field '" + field + "': " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// The scenario generator was asked for something it cannot produce.
class GenerationError : public Error {
public:
  using Error::Error;
};

/// An exhaustive oracle or exact solver declined an instance that is too large.
class RefusalError : public Error {
public:
  using Error::Error;
};

}  // namespace mrta
