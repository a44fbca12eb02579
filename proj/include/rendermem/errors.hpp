#pragma once

#include <stdexcept>
#include <string>

namespace rendermem {

// Root of the project's exception hierarchy. The intermediate classes group
// errors by CLI exit code (see tools/rendermem_main.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scene, geometry and question errors (exit code 3).
class SceneError : public Error {
 public:
  using Error::Error;
};

class NonFiniteInput : public SceneError {
 public:
  using SceneError::SceneError;
};
class SchemaError : public SceneError {
 public:
  using SceneError::SceneError;
};
class DuplicateObjectId : public SceneError {
 public:
  using SceneError::SceneError;
};
class DanglingMeshOwner : public SceneError {
 public:
  using SceneError::SceneError;
};
class InvalidIndex : public SceneError {
 public:
  using SceneError::SceneError;
};
class UnknownObject : public SceneError {
 public:
  using SceneError::SceneError;
};
class UnknownAttribute : public SceneError {
 public:
  using SceneError::SceneError;
};
class InapplicableAction : public SceneError {
 public:
  using SceneError::SceneError;
};
class DomainError : public SceneError {
 public:
  using SceneError::SceneError;
};
class DegenerateElevation : public SceneError {
 public:
  using SceneError::SceneError;
};
class DegenerateSphere : public SceneError {
 public:
  using SceneError::SceneError;
};
class DegenerateAnchors : public SceneError {
 public:
  using SceneError::SceneError;
};
class ResolutionError : public SceneError {
 public:
  using SceneError::SceneError;
};
class NonUnitDirection : public SceneError {
 public:
  using SceneError::SceneError;
};
class AnchorArityError : public SceneError {
 public:
  using SceneError::SceneError;
};
class ConfigError : public SceneError {
 public:
  using SceneError::SceneError;
};

// Filesystem and serialization failures (exit code 4).
class IoError : public Error {
 public:
  using Error::Error;
};

// External reasoner failures (exit code 5).
class ReasonerError : public Error {
 public:
  using Error::Error;
};
class ReasonerUnavailable : public ReasonerError {
 public:
  using ReasonerError::ReasonerError;
};
class ProtocolError : public ReasonerError {
 public:
  using ReasonerError::ReasonerError;
};

}  // namespace rendermem
