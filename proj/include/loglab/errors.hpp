#ifndef LOGLAB_ERRORS_HPP
#define LOGLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace loglab {

/// A requested computation would exceed a configured size budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, double cost) : std::runtime_error(what), cost_(cost) {}
  double cost() const noexcept { return cost_; }

 private:
  double cost_;
};

/// A Monte Carlo estimator could not produce a finite result.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace loglab

#endif  // LOGLAB_ERRORS_HPP
