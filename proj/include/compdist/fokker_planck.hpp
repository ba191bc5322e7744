#pragma once

// Drift terms that make a prescribed time-dependent mixture density f(y, t)
// solve the Fokker-Planck equation
//
//   df/dt = -d/dy (b f) + 1/2 d^2/dy^2 (s^2 f)
//
// with constant diffusion s^2 and b = s^2/(2f) df/dy - (1/f) dcdf/dt.

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "compdist/mixture.hpp"
#include "compdist/model_spec.hpp"
#include "compdist/rng.hpp"
#include "compdist/truncation.hpp"

namespace compdist {

/// Mixture parameters and their time derivatives at one instant.
struct PathState {
  double t = 0.0;
  std::vector<BaseDistribution> components;
  std::vector<double> mu, sigma, nu;  // nu is +inf for lognormal components
  std::vector<double> mu_dot, sigma_dot;
  /// All ell weights and their derivatives (the last weight is 1 - sum of
  /// the others, so its derivative is minus the sum of theirs).
  std::vector<double> weights, weight_dots;
  bool truncated = false;
  double y_min = -std::numeric_limits<double>::infinity();
  double y_max = std::numeric_limits<double>::infinity();
  double y_min_dot = 0.0;
  double y_max_dot = 0.0;
  /// Per-component window masses (1 when untruncated).
  std::vector<double> masses;

  std::size_t size() const { return components.size(); }
  Mixture mixture() const;
  std::optional<TruncationWindow> window() const;
};

/// Linear interpolation between two parameter sets in unconstrained
/// coordinates: mu, log sigma, stick-breaking logits of the weights, and
/// y_min / y_max of the window. Supports the LN, LL and log-Student mixture
/// families (natural parameters ordered as in Model).
class ParamPath {
 public:
  ParamPath(ModelSpec spec, double t0, double t1, std::vector<double> params_t0,
            std::vector<double> params_t1, std::optional<TruncationWindow> window_t0 = std::nullopt,
            std::optional<TruncationWindow> window_t1 = std::nullopt);

  /// A path that stays at one parameter set.
  static ParamPath constant(ModelSpec spec, std::vector<double> params,
                            std::optional<TruncationWindow> window = std::nullopt);

  const ModelSpec& spec() const { return spec_; }
  double t0() const { return t0_; }
  double t1() const { return t1_; }
  PathState at(double t) const;

 private:
  ModelSpec spec_;
  double t0_;
  double t1_;
  std::vector<double> u0_;
  std::vector<double> u_dot_;
  double y_min0_ = 0.0, y_min_dot_ = 0.0, y_max0_ = 0.0, y_max_dot_ = 0.0;
};

/// Density with the partial derivatives the drift construction needs.
class TimeDependentDensity {
 public:
  virtual ~TimeDependentDensity() = default;
  virtual double pdf(double y, double t) const = 0;
  virtual double dpdf_dy(double y, double t) const = 0;
  virtual double cdf(double y, double t) const = 0;
  virtual double dcdf_dt(double y, double t) const = 0;
};

/// b = s^2/(2f) df/dy - (1/f) dcdf/dt. Throws ZeroDensity when f < 1e-300.
double generic_drift(const TimeDependentDensity& density, double s, double y, double t);

/// f, df/dy, cdf and dcdf/dt of a mixture path, the last assembled by the
/// chain rule over the parameter slopes. Caches the most recent PathState,
/// so one instance must not be shared between threads.
class MixturePathDensity : public TimeDependentDensity {
 public:
  explicit MixturePathDensity(ParamPath path) : path_(std::move(path)) {}

  double pdf(double y, double t) const override;
  double dpdf_dy(double y, double t) const override;
  double cdf(double y, double t) const override;
  double dcdf_dt(double y, double t) const override;

  const ParamPath& path() const { return path_; }

 private:
  const PathState& state(double t) const;

  ParamPath path_;
  mutable std::optional<PathState> cached_;
};

double path_pdf(const PathState& st, double y);
double path_dpdf_dy(const PathState& st, double y);
double path_cdf(const PathState& st, double y);
double path_dcdf_dt(const PathState& st, double y);

/// generic_drift evaluated directly on a PathState.
double generic_drift(const PathState& st, double s, double y);

/// mu' + (y - mu) sigma'/sigma - s^2 (1 + nu)(y - mu) / (2((y - mu)^2 + nu sigma^2));
/// nu = +inf gives the normal limit.
double k_term(double y, double mu, double sigma, double nu, double s, double mu_dot,
              double sigma_dot);

/// k-term of a log-Student component truncated to [y_min, y_max] whose
/// bounds move at y_min_dot and y_max_dot.
double k_term_truncated(double y, double y_min, double y_max, double y_min_dot, double y_max_dot,
                        double mu, double sigma, double nu, double s, double mu_dot,
                        double sigma_dot);

/// Posterior probabilities tau_i(y, t).
std::vector<double> posteriors(const PathState& st, double y);

enum class DriftKind { kFourLSt, kFiveLStTT, kGeneric };

struct DriftField {
  double s = 1.0;
  ParamPath path;
  DriftKind kind = DriftKind::kGeneric;

  DriftField(double s_, ParamPath path_, DriftKind kind_);
};

/// sum_i k_i tau_i - sum_{j<ell} p_j' pi_j for log-Student (or lognormal)
/// mixture paths, truncated or not.
double closed_form_drift(const PathState& st, double s, double y);

/// Closed form for the 4LSt path. Throws std::invalid_argument for other specs.
double drift_4lst(double y, double t, const DriftField& field);
/// Closed form for the 5LSttt path; throws OutOfWindow outside [y_min(t), y_max(t)].
double drift_5lsttt(double y, double t, const DriftField& field);

/// Dispatches on field.kind.
double drift(const DriftField& field, const PathState& st, double y);
double drift(const DriftField& field, double y, double t);

/// Residual f_t + (b f)_y - (s^2/2) f_yy by central differences at one point.
double fp_residual_at(const DriftField& field, double y, double t, double h_y, double h_t);

/// Residual of the Fokker-Planck equation by central differences, maximum
/// absolute value over the grid.
double fp_residual(const DriftField& field, std::span<const double> y_grid,
                   std::span<const double> t_grid, double h_y, double h_t);

struct ConvergenceStudy {
  std::vector<double> h;
  std::vector<double> residual;
  /// log2 of successive residual ratios.
  std::vector<double> order;
};

/// fp_residual at h, h/2, ..., (levels entries) with h_y = h_t = h.
ConvergenceStudy fp_convergence(const DriftField& field, std::span<const double> y_grid,
                                std::span<const double> t_grid, double h, int levels);

struct SdeOptions {
  std::size_t n_steps = 2000;
  /// Trajectories sharing one random stream.
  std::size_t block_size = 4096;
  /// Evaluate the drift on a grid spanning the ensemble at each step and
  /// interpolate (cubic); 0 evaluates it exactly at every trajectory.
  std::size_t table_points = 4001;
};

/// Euler-Maruyama transport of y0 from t0 to t1. Truncated paths reflect at
/// the moving window edges.
std::vector<double> simulate_sde(const DriftField& field, std::vector<double> y0, double t0,
                                 double t1, const SdeOptions& options, const RngStream& stream);

/// Draws from f(., t).
std::vector<double> sample_path_y(const ParamPath& path, double t, std::size_t n,
                                  const RngStream& stream);

}  // namespace compdist
