#pragma once

#include "ratreg/problems.hpp"
#include "ratreg/ratkrylov.hpp"

#include <stdexcept>
#include <string>

namespace ratreg {

struct DiscrepancyConfig {
  double tau = 1.5;   // dp threshold multiplier, > 1
  double tau2 = 3.0;  // signal condition multiplier, > tau
  double delta = 0.0;
  int max_n = 100;
};

/// ||y^delta|| >= tau2 * delta.
bool checkSignalCondition(const Vector& y_noisy, const DiscrepancyConfig& config);

/// Raised when the data carries too little signal for the discrepancy
/// principle (pathological data).
class SignalConditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when max_n is reached without satisfying the stopping condition.
/// Carries the full trace so sweeps can drop the cell instead of aborting.
class ExhaustionError : public std::runtime_error {
public:
  ExhaustionError(const std::string& what, SolveTrace trace)
      : std::runtime_error(what), trace(std::move(trace)) {}
  SolveTrace trace;
};

enum class Method { Aggregation, RatCG, Cgne };

std::string toString(Method method);
Method methodFromString(const std::string& name);

struct DiscrepancyRun {
  SolveTrace trace;  // rho_0 .. rho_{n*}, sigma values, stop_index = n*
  Vector x;          // iterate at n*
  int n_star = 0;
  int effective_rank = 0;
};

/// Runs the chosen method until the first n with rho_n < tau * delta
/// (rho_0 = ||y^delta||); by monotonicity this n satisfies both discrepancy
/// inequalities. The aggregation and RatCG residuals are evaluated through
/// the requested path (factorized by default, which stays stable on floored
/// schedules).
DiscrepancyRun runWithDiscrepancy(Method method, const InverseProblem& problem,
                                  const AlphaSchedule& schedule, const DiscrepancyConfig& config,
                                  SolvePath path = SolvePath::Factorized,
                                  bool reorthogonalize = true);

enum class ScheduleKind { ConstantFloor, GeometricFloor, DeltaScaled };

std::string toString(ScheduleKind kind);
ScheduleKind scheduleKindFromString(const std::string& name);

struct ScheduleParams {
  double alpha1 = 8.0;  // geometric start
  double q = 0.5;       // geometric ratio, in (0,1)
  double c0 = 1.0;      // uniform floor
  double C = 1.0;       // delta-scaled multiplier
};

/// Builds the length-n schedule for the requested kind:
///   constant_floor:  alpha_i = c0 (1 + i eps)
///   geometric_floor: alpha_i = max(alpha1 q^{i-1}, c0 (1 + i eps))
///   delta_scaled:    alpha_i = max(C delta^{1/mu_star}, c0) (1 + i eps)
/// with eps = 1e-6 keeping the parameters pairwise distinct. The achieved
/// c_it constant is computed and stored on the schedule.
AlphaSchedule makeSchedule(ScheduleKind kind, const ScheduleParams& params, double delta,
                           double mu_star, int n);

}  // namespace ratreg
