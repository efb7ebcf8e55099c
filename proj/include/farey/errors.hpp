#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace farey {

/// Argument outside the mathematical domain of an operation (n = 0, x <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters or tables that violate a construction invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An infinite sum whose tail is not summable (e.g. integrating a constant against mu).
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quantity that is not defined for the given family (e.g. Karamata at delta = 1).
class NotApplicable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Transfer state whose exact prefix has been consumed.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Refusal to start a computation whose elementary-update count exceeds the budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, double estimate, double budget)
      : std::runtime_error(what), estimate_(estimate), budget_(budget) {}

  double estimate() const noexcept { return estimate_; }
  double budget() const noexcept { return budget_; }

 private:
  double estimate_;
  double budget_;
};

using Index = std::int64_t;

}  // namespace farey
