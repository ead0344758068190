#ifndef EGAUDIN_ERRORS_HPP
#define EGAUDIN_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace egaudin {

/// A parameter lies outside the domain of the operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An argument came within the pole guard of a singularity.
class PoleError : public std::runtime_error {
 public:
  PoleError(const std::string& what, std::complex<double> location)
      : std::runtime_error(what), location_(location) {}

  /// The lattice point (or coinciding parameter) that was hit.
  std::complex<double> location() const { return location_; }

 private:
  std::complex<double> location_;
};

/// A numerical procedure failed to produce a usable answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace egaudin

#endif  // EGAUDIN_ERRORS_HPP
