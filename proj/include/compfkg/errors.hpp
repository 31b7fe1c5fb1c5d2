#pragma once

#include <stdexcept>
#include <string>

namespace compfkg {

/// Input outside the domain of an operation (element not in lattice, bad range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An enumeration would exceed a configured cap.
class CapExceeded : public std::length_error {
 public:
  CapExceeded(const std::string& what, std::size_t bound)
      : std::length_error(what + " (bound " + std::to_string(bound) + ")"), bound_(bound) {}
  std::size_t bound() const { return bound_; }

 private:
  std::size_t bound_;
};

/// A mathematical structure failed to have a property it is claimed to have
/// (missing lattice bound, violated identity). Never silently repaired.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace compfkg
