#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mstwist {

// Violated precondition or malformed input. Maps to CLI exit code 1.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation requested at (or numerically on) a pole.
class pole_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// More than one spectrum point matches a floating-point alpha.
class ambiguity_error : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

// A truncation parameter is too small for the requested tolerance.
class cutoff_error : public precondition_error {
 public:
  cutoff_error(const std::string& what, double required)
      : precondition_error(what), required_(required) {}
  double required() const noexcept { return required_; }

 private:
  double required_;
};

// An extrapolation ladder did not settle. Carries the difference history.
// Maps to CLI exit code 2.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

// Two independent computations of the same quantity disagree.
class disagreement_error : public std::runtime_error {
 public:
  disagreement_error(const std::string& what,
                     std::vector<std::complex<double>> first,
                     std::vector<std::complex<double>> second)
      : std::runtime_error(what), first_(std::move(first)), second_(std::move(second)) {}
  const std::vector<std::complex<double>>& first() const noexcept { return first_; }
  const std::vector<std::complex<double>>& second() const noexcept { return second_; }

 private:
  std::vector<std::complex<double>> first_;
  std::vector<std::complex<double>> second_;
};

}  // namespace mstwist
