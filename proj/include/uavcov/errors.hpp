#pragma once

#include <stdexcept>
#include <string>

namespace uavcov {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

// Two circles coincide within the snapping tolerance.
class DegenerateOverlap : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class AltitudeOutOfBand : public Error {
 public:
  using Error::Error;
};

// Cells were computed for a different swarm state than the one being queried.
class StaleCells : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace uavcov
