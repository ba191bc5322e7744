#include "compdist/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "compdist/errors.hpp"

namespace compdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vertex {
  std::vector<double> x;
  double f;
};

class Simplex {
 public:
  Simplex(const Objective& objective, int budget) : objective_(objective), budget_(budget) {}

  double eval(const std::vector<double>& x) {
    ++evals_;
    const double f = objective_(x);
    return std::isfinite(f) ? f : kInf;
  }

  int evals() const { return evals_; }
  bool exhausted() const { return evals_ >= budget_; }

  // One Nelder-Mead run from a fresh simplex around x0.
  NelderMeadResult run(const std::vector<double>& x0, double f0, const NelderMeadOptions& opt) {
    const std::size_t n = x0.size();
    std::vector<Vertex> s;
    s.reserve(n + 1);
    s.push_back({x0, f0});
    for (std::size_t i = 0; i < n; ++i) {
      auto x = x0;
      x[i] += opt.initial_step * std::max(1.0, std::fabs(x0[i]));
      const double f = eval(x);
      s.push_back({std::move(x), f});
    }

    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    NelderMeadResult result;
    while (true) {
      std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
      const Vertex& best = s.front();

      double scale = 1.0;
      for (double v : best.x) scale = std::max(scale, std::fabs(v));
      double diameter = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
          diameter = std::max(diameter, std::fabs(s[k].x[j] - best.x[j]));
        }
      }
      if (diameter / scale < opt.simplex_tol) {
        result.converged = true;
        result.stop = NelderMeadStop::kSimplexTolerance;
        break;
      }
      const double spread = s.back().f - best.f;
      if (opt.value_tol > 0.0 && std::isfinite(spread) &&
          spread <= opt.value_tol * std::max(std::fabs(best.f), 1e-300)) {
        result.converged = true;
        result.stop = NelderMeadStop::kValueTolerance;
        break;
      }
      if (exhausted()) {
        result.stop = NelderMeadStop::kMaxEvals;
        break;
      }

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) centroid[j] += s[k].x[j];
      }
      for (double& c : centroid) c /= static_cast<double>(n);

      Vertex& worst = s.back();
      for (std::size_t j = 0; j < n; ++j) xr[j] = 2.0 * centroid[j] - worst.x[j];
      const double fr = eval(xr);

      if (fr < s.front().f) {
        for (std::size_t j = 0; j < n; ++j) xe[j] = 3.0 * centroid[j] - 2.0 * worst.x[j];
        const double fe = eval(xe);
        if (fe < fr) {
          worst.x = xe;
          worst.f = fe;
        } else {
          worst.x = xr;
          worst.f = fr;
        }
        continue;
      }
      if (fr < s[n - 1].f) {
        worst.x = xr;
        worst.f = fr;
        continue;
      }
      bool shrink = false;
      if (fr < worst.f) {
        for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + 0.5 * (xr[j] - centroid[j]);
        const double fc = eval(xc);
        if (fc <= fr) {
          worst.x = xc;
          worst.f = fc;
        } else {
          shrink = true;
        }
      } else {
        for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + 0.5 * (worst.x[j] - centroid[j]);
        const double fc = eval(xc);
        if (fc < worst.f) {
          worst.x = xc;
          worst.f = fc;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (std::size_t k = 1; k <= n; ++k) {
          for (std::size_t j = 0; j < n; ++j) {
            s[k].x[j] = s[0].x[j] + 0.5 * (s[k].x[j] - s[0].x[j]);
          }
          s[k].f = eval(s[k].x);
        }
      }
    }
    result.argmin = s.front().x;
    result.value = s.front().f;
    return result;
  }

 private:
  const Objective& objective_;
  int budget_;
  int evals_ = 0;
};

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0,
                             const NelderMeadOptions& options) {
  Simplex simplex(objective, options.max_evals);
  const double f0 = simplex.eval(x0);
  if (!std::isfinite(f0)) throw NonFiniteObjective("objective is not finite at the starting point");
  if (x0.empty()) return {x0, f0, simplex.evals(), 0, true, NelderMeadStop::kSimplexTolerance};

  NelderMeadResult best = simplex.run(x0, f0, options);
  int restarts = 0;
  while (best.converged && restarts < options.max_restarts && !simplex.exhausted()) {
    NelderMeadResult next = simplex.run(best.argmin, best.value, options);
    ++restarts;
    const double gain = best.value - next.value;
    const bool improved = gain > 0.0;
    const bool material =
        gain > std::max(options.value_tol, 1e-14) * std::max(std::fabs(best.value), 1e-300);
    if (improved || !next.converged) {
      const bool keep_converged = next.converged;
      best = std::move(next);
      best.converged = keep_converged;
    }
    if (!material) break;
  }
  best.evals = simplex.evals();
  best.restarts = restarts;
  return best;
}

}  // namespace compdist
