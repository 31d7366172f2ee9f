#pragma once

#include <stdexcept>

namespace ibtree {

/// Malformed or unsupported input file (PGM, prior weights, tree JSON).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A probability vector puts mass where the reference distribution has none.
class SupportError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Branch-and-bound gave up before proving optimality.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The relevance floor cannot be met by any tree of the map.
class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace ibtree
