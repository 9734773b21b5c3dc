#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace coverdx {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (JSON, CSV, transcript).
class ParseError : public Error {
 public:
  using Error::Error;
};

class UnknownIdError : public Error {
 public:
  explicit UnknownIdError(const std::string& id)
      : Error("unknown id: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class NoCauseError : public Error {
 public:
  explicit NoCauseError(const std::string& symptom)
      : Error("symptom has no causes: " + symptom) {}
};

class AlreadyObservedError : public Error {
 public:
  explicit AlreadyObservedError(const std::string& symptom)
      : Error("symptom already observed: " + symptom) {}
};

class SessionStateError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

class NotImplementedError : public Error {
 public:
  using Error::Error;
};

}  // namespace coverdx
