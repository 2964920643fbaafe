#include <cmath>
#include <limits>

#include "spedac/solvers.h"

namespace spedac {

std::string ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kFeasible:
      return "Feasible";
    case SolveStatus::kInfeasible:
      return "Infeasible";
    case SolveStatus::kTimeLimit:
      return "TimeLimit";
  }
  return "Unknown";
}

double OptimalityGap(double lower_bound, double upper_bound) {
  if (std::isinf(upper_bound) || std::isnan(upper_bound)) {
    throw std::domain_error("optimality gap undefined without an upper bound");
  }
  if (lower_bound > upper_bound) {
    throw std::domain_error("lower bound exceeds upper bound");
  }
  if (upper_bound == lower_bound) return 0.0;
  if (upper_bound <= 0.0) {
    throw std::domain_error("optimality gap undefined for non-positive upper bound");
  }
  return 100.0 * (upper_bound - lower_bound) / upper_bound;
}

double OptimalityGap(const SolveReport& report) {
  const double ub = report.upper_bound >= kInfiniteCost
                        ? std::numeric_limits<double>::infinity()
                        : static_cast<double>(report.upper_bound);
  return OptimalityGap(static_cast<double>(report.lower_bound), ub);
}

}  // namespace spedac
