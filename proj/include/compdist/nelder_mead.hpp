#pragma once

#include <functional>
#include <span>
#include <vector>

namespace compdist {

struct NelderMeadOptions {
  int max_evals = 200000;
  /// Stop once max_i ||x_i - x_best||_inf / max(1, ||x_best||_inf) falls below this.
  double simplex_tol = 1e-9;
  /// Also stop once (f_worst - f_best) <= value_tol * max(|f_best|, 1e-300);
  /// 0 disables the check.
  double value_tol = 1e-15;
  /// Initial edge length along coordinate i is initial_step * max(1, |x0_i|).
  double initial_step = 0.1;
  /// Fresh-simplex restarts from the incumbent after convergence; a restart
  /// is only repeated while it still improves the value.
  int max_restarts = 3;
};

enum class NelderMeadStop { kSimplexTolerance, kValueTolerance, kMaxEvals };

struct NelderMeadResult {
  std::vector<double> argmin;
  double value = 0.0;
  int evals = 0;
  int restarts = 0;
  bool converged = false;
  NelderMeadStop stop = NelderMeadStop::kMaxEvals;
};

using Objective = std::function<double(std::span<const double>)>;

/// Minimizes `objective` from `x0` with reflection/expansion/contraction/
/// shrink coefficients (1, 2, 1/2, 1/2). Non-finite objective values are
/// treated as +inf. Throws NonFiniteObjective when the objective is not
/// finite at x0.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace compdist
