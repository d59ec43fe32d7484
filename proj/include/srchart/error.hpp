#pragma once

#include <stdexcept>
#include <string>

namespace srchart {

// Raised for inputs outside an operation's mathematical domain. The CLI maps
// this family to exit code 1.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Every observation is a tie (p0 == 1), so no signed ranks exist.
class DegenerateScenario : public DomainError {
 public:
  using DomainError::DomainError;
};

// No admissible control limit reaches the requested confidence level.
class UnreachableConfidence : public DomainError {
 public:
  using DomainError::DomainError;
};

// Input exceeds a documented resource bound (e.g. n > 200 for exact p.m.f.s).
class ResourceLimit : public DomainError {
 public:
  using DomainError::DomainError;
};

// The SND is undefined for symmetric inputs (gamma1 == 0) or c == 0; callers
// should fall back to the normal approximation.
class UseNormalApproximation : public DomainError {
 public:
  using DomainError::DomainError;
};

// Training produced a non-finite loss.
class TrainingDiverged : public DomainError {
 public:
  TrainingDiverged(int epoch, const std::string& what)
      : DomainError(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

// A persisted file does not match the expected schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace srchart
