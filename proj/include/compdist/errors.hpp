#pragma once

#include <stdexcept>
#include <string>

namespace compdist {

// Argument-domain violations (x <= 0, sigma <= 0, ...) are reported with
// std::domain_error / std::invalid_argument. The types below name the
// recoverable failure modes callers are expected to branch on.

class MassTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotEstimable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteObjective : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RejectionBudget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroDensity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfWindow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyAfterCleaning : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace compdist
