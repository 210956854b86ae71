#pragma once

#include <stdexcept>
#include <string>

namespace symbiolife {

/// Base for every error the library raises. Each subclass maps to one CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A seed does not fit in its half of the arena.
class SeedTooLarge : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownIndividual : public Error {
 public:
  using Error::Error;
};

class MalformedRle : public Error {
 public:
  using Error::Error;
};

class UnsupportedRule : public Error {
 public:
  using Error::Error;
};

class MalformedSeed : public Error {
 public:
  using Error::Error;
};

class ConstantSample : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidSample : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& reason)
      : Error(key.empty() ? reason : key + ": " + reason), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class MissingArchive : public Error {
 public:
  using Error::Error;
};

class MalformedCsv : public Error {
 public:
  using Error::Error;
};

}  // namespace symbiolife
