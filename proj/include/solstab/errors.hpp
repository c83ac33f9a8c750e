#pragma once

#include <stdexcept>
#include <string>

namespace solstab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed .alg document, bad index, duplicate entry or bad metric.
class ParseError : public Error {
 public:
  using Error::Error;
};

class InvalidAlgebra : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// The closed-form Ricci tensor disagrees with the Riemann contraction.
/// Always an internal convention bug, never bad input.
class ContractionMismatch : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class EinsteinVerificationFailed : public Error {
 public:
  using Error::Error;
};

class NotExpanding : public Error {
 public:
  using Error::Error;
};

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class PositivityLost : public Error {
 public:
  using Error::Error;
};

class Blowup : public Error {
 public:
  using Error::Error;
};

}  // namespace solstab
