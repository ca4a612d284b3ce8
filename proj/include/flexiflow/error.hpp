#pragma once

#include <stdexcept>
#include <string>

namespace flexiflow {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent model/configuration input (widths, wafer sizes, empty core lists, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Program image does not fit the machine or its entry point is unusable.
class LoadError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public LoadError {
 public:
  using LoadError::LoadError;
};

// A deployment whose duty cycle exceeds 100%.
class InfeasibleScenario : public Error {
 public:
  using Error::Error;
};

// Ratio with a zero denominator.
class UndefinedRatio : public Error {
 public:
  using Error::Error;
};

// Malformed JSON/CSV input or unreadable file.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace flexiflow
