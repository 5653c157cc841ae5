#pragma once

#include <stdexcept>
#include <string>

namespace necklace {

/// Malformed or contract-violating input (bad file, indivisible color
/// counts, violated parameter inequalities). Maps to CLI exit code 3.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A box or point outside the region where an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace necklace
