#pragma once

#include <stdexcept>
#include <string>

namespace eqwalk {

/// Precondition violated by a caller-supplied value.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An amplitude would be pushed past the edge of the site window.
class WindowOverflow : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Group velocity requested at a band-touching point.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Not enough non-negligible sites to fit a profile.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eqwalk
