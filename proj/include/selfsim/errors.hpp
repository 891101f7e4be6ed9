#pragma once

#include <stdexcept>
#include <string>

namespace selfsim {

// Base for every error the library raises. Callers that only care about
// "something was wrong with the request" can catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// L = gamma^{1/(p-1)} requested where gamma <= 0 (p <= p_sg).
class AmplitudeUndefined : public Error {
 public:
  using Error::Error;
};

// Non-integer power of a negative value, or a negative argument to a
// potential that is only defined on [0, inf).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Frame/kind pair with no exact first-order system (LogPhase is autonomous
// only for the steady equation).
class UnsupportedCombination : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Both ends of a bisection bracket carry the same classification.
class BracketError : public Error {
 public:
  using Error::Error;
};

// Indicial roots are complex but a single real mode was requested.
class ComplexRootError : public Error {
 public:
  using Error::Error;
};

}  // namespace selfsim
