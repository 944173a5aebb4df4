#pragma once

#include <stdexcept>
#include <string>

namespace fewbody {

/// A range parameter combination for which the integral diverges, or an
/// argument outside an operation's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested derivative order exceeds the compiled jet order.
class OrderError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Overlap matrix not positive definite, or a norm below the floor.
class DegenerateBasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No finite optimal scale: the potential energy is not attractive.
class VirialError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace fewbody
