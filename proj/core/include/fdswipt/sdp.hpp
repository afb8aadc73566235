#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fdswipt/linalg.hpp"

namespace fdswipt::sdp {

enum class Sense { le, eq, ge };

struct LinearConstraint {
  std::vector<Matrix> coeffs;  // one Hermitian matrix per block
  Sense sense = Sense::eq;
  double rhs = 0.0;
};

/// Block-structured Hermitian SDP:
///   minimize    sum_k trace(objective[k] * X[k])
///   subject to  sum_k trace(constraint.coeffs[k] * X[k])  <=/==/>=  rhs
///               X[k] >= 0 (PSD), one block per entry of block_dims.
struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<Matrix> objective;
  std::vector<LinearConstraint> constraints;

  // Throws std::invalid_argument on shape mismatch, missing blocks, or
  // non-Hermitian coefficient data.
  void validate() const;

  // Plain-text dump of the instance (block dims, then matrices row-major,
  // then constraints). Layout documented in docs/sdp-format.md.
  void dump(std::ostream& os) const;
};

enum class SolveStatus { optimal, infeasible, unbounded, max_iterations };

std::string to_string(SolveStatus s);

struct SdpSolution {
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<Matrix> block_values;  // Hermitian PSD, one per block
  double objective_value = 0.0;
  int iterations = 0;
  double max_constraint_violation = 0.0;
  double min_block_eigenvalue = 0.0;
};

struct SolverSettings {
  double tol = 1e-7;
  int max_iter = 200;
};

/// Dense primal-dual interior-point solve with Nesterov-Todd scaling on the
/// real symmetric embedding of the Hermitian blocks. Inequalities are
/// absorbed into scalar slack blocks internally. When the main solve stalls,
/// a phase-1 pass (minimize the residual of an exactly-feasible homotopy)
/// decides between infeasible and max-iterations.
SdpSolution solve_sdp(const SdpProblem& problem, const SolverSettings& settings = {});

struct Certificate {
  bool feasible = false;
  double max_violation = 0.0;
  double min_eigenvalue = 0.0;
};

/// Recompute every constraint residual and block eigenvalue floor from the
/// problem data alone, independent of solver internals.
Certificate certify_solution(const SdpProblem& problem, const SdpSolution& solution);

}  // namespace fdswipt::sdp
