#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ahlfors {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Band limit of a field or metric description exceeds N/4 on some axis.
class BandLimitError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Metric not positive definite, or a quadrature density that is not positive.
class DegenerateMetric : public Error {
 public:
  DegenerateMetric(const std::string& what, std::vector<double> point = {})
      : Error(what), point_(std::move(point)) {}
  const std::vector<double>& point() const { return point_; }

 private:
  std::vector<double> point_;
};

class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  // Relative residual after each iteration.
  const std::vector<double>& residual_history() const { return history_; }

 private:
  std::vector<double> history_;
};

// Right-hand side has a component along the deflated kernel.
class InconsistentSystem : public Error {
 public:
  using Error::Error;
};

}  // namespace ahlfors
