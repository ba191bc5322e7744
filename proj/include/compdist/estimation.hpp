#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "compdist/model.hpp"
#include "compdist/model_spec.hpp"
#include "compdist/nelder_mead.hpp"
#include "compdist/truncation.hpp"

namespace compdist {

struct FitConfig {
  int max_evals = 200000;
  double simplex_tol = 1e-9;
  /// Relative spread of objective values across the simplex at which a run
  /// stops; see NelderMeadOptions::value_tol.
  double value_tol = 1e-14;
  int n_starts = 10;
  std::uint64_t seed = 20190501;
  double se_step = 1e-4;
  double verify_width_se = 8.0;
};

struct FittedModel {
  ModelSpec spec;
  std::optional<TruncationWindow> window;
  /// Natural parameters in canonical order (see Model).
  std::vector<double> params;
  /// Log-likelihood of the x-space sample.
  double loglik = 0.0;
  std::vector<double> std_errors;
  std::size_t n = 0;
  bool converged = false;
  int starts_agreeing = 0;
  /// Observed information was not positive definite; std_errors are NaN.
  bool singular_information = false;
  /// Times the perturbation check found a better point and re-optimized.
  int verification_rounds = 0;
  long evals = 0;

  int k() const { return spec.k(); }
  Model model() const { return Model::from_params(spec, params, window); }
};

/// Bijection between natural parameters and the unconstrained space the
/// optimizer walks in: logs of positive parameters, stick-breaking logits of
/// the mixture weights (each weight kept above a 1e-10 floor). Component
/// scales of mixtures with two or more components are kept above
/// `sigma_floor` (sigma = sigma_floor + exp(u)).
class ParamTransform {
 public:
  explicit ParamTransform(ModelSpec spec, double sigma_floor = 0.0);

  std::vector<double> to_unconstrained(std::span<const double> natural) const;
  std::vector<double> to_natural(std::span<const double> u) const;

  const ModelSpec& spec() const { return spec_; }
  double sigma_floor() const { return sigma_floor_; }

  static constexpr double kWeightFloor = 1e-10;

 private:
  ModelSpec spec_;
  double sigma_floor_ = 0.0;
};

/// Negative mean y-space log-likelihood; +inf at invalid parameters.
/// Mixture component scales are floored at kMinSigmaFrac times the standard
/// deviation of ln x, which rules out single-point likelihood spikes.
class FitObjective {
 public:
  FitObjective(ModelSpec spec, std::span<const double> x,
               std::optional<TruncationWindow> window = std::nullopt);

  double operator()(std::span<const double> u) const;
  /// Sum of x-space log densities at unconstrained u; -inf when invalid.
  long double log_likelihood_u(std::span<const double> u) const;

  const ParamTransform& transform() const { return transform_; }
  std::size_t size() const { return y_.size(); }
  std::span<const double> log_data() const { return y_; }

  static constexpr double kMinSigmaFrac = 1e-2;

 private:
  ParamTransform transform_;
  std::optional<TruncationWindow> window_;
  std::vector<double> y_;
  long double sum_y_ = 0.0L;
  mutable std::vector<double> scratch_;
};

/// Deterministic starting points (natural parameters) for a spec.
std::vector<std::vector<double>> starting_points(const ModelSpec& spec,
                                                 std::span<const double> sorted_y, int n_starts,
                                                 std::uint64_t seed);

/// Maximum-likelihood fit. Throws NotEstimable when no start converges and
/// std::invalid_argument when n < 10 k or, for tt specs, when the window is
/// missing or excludes data.
FittedModel fit_mle(const ModelSpec& spec, std::span<const double> x,
                    const std::optional<TruncationWindow>& window = std::nullopt,
                    const FitConfig& cfg = {},
                    std::span<const std::vector<double>> warm_starts = {});

struct StandardErrors {
  std::vector<double> natural;
  std::vector<double> unconstrained;
  bool singular = false;
};

/// Square roots of the diagonal of the inverse observed information, by
/// central differences in the unconstrained coordinates and mapped to the
/// natural scale by the delta method.
StandardErrors standard_errors(const ModelSpec& spec, std::span<const double> natural,
                               std::span<const double> x,
                               const std::optional<TruncationWindow>& window = std::nullopt,
                               double se_step = 1e-4);

/// Natural parameters of the larger nested model `target` that reproduce
/// (or, for log-Student ladders, nearly reproduce) the density of `fitted`.
/// Empty when `target` does not nest `fitted`.
std::optional<std::vector<double>> nested_warm_start(const FittedModel& fitted,
                                                     const ModelSpec& target);

/// Warm starts for `target` from every nesting model already in `fits`.
std::vector<std::vector<double>> warm_starts_from(const std::map<std::string, FittedModel>& fits,
                                                  const ModelSpec& target);

}  // namespace compdist
