#pragma once

#include <stdexcept>
#include <string>

namespace compatlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Objects that live on different spaces, malformed partitions, zero-mass blocks.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A built-in theorem-level assertion was violated by an instance.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

/// Model coefficients produced a value outside their declared domain.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A solver produced a non-finite value; `path()` names the offending path.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::size_t path)
      : Error(what + " (path " + std::to_string(path) + ")"), path_(path) {}
  std::size_t path() const noexcept { return path_; }

 private:
  std::size_t path_;
};

/// Ensembles or reports that do not share seed / grid provenance.
class ProvenanceError : public Error {
 public:
  using Error::Error;
};

/// Unparseable or inconsistent configuration and scenario files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace compatlab
