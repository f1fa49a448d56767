#pragma once

#include <stdexcept>
#include <string>

namespace dioph {

// Base of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad source specification, degenerate polynomial, empty box.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A rational number was passed where an irrational source is required.
class RationalInput : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A construction plan whose parameters are outside the supported range.
class InvalidPlan : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// The precision budget ran out before a comparison could be decided.
class Indeterminate : public Error {
 public:
  using Error::Error;
};

// A requested enumeration would exceed its configured cost guard.
class CostGuardExceeded : public Error {
 public:
  using Error::Error;
};

// A stored result did not survive independent re-verification.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

// Two independent search routes disagreed.
class SearchMismatch : public VerificationFailure {
 public:
  using VerificationFailure::VerificationFailure;
};

// A nonzero polynomial value fell below its denominator lower bound.
class BoundViolation : public VerificationFailure {
 public:
  using VerificationFailure::VerificationFailure;
};

// The vector construction could not keep its denominator ordering.
class InfeasibleSchedule : public Error {
 public:
  using Error::Error;
};

}  // namespace dioph
