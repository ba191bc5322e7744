#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "compdist/mixture.hpp"
#include "compdist/model_spec.hpp"
#include "compdist/truncation.hpp"

namespace compdist {

/// One of the 17 models (or its tt variant) together with concrete parameter
/// values. Single-family models are one-component mixtures.
///
/// The natural parameter vector is ordered as the family's own parameter
/// list for DPLN/GB2/LNSNP/LN, and as (mu_1, sigma_1, ..., mu_l, sigma_l,
/// p_1, ..., p_{l-1}) for mixtures; log-Student degrees of freedom are fixed
/// by the spec and not part of the vector.
class Model {
 public:
  Model(ModelSpec spec, Mixture mixture, std::optional<TruncationWindow> window = std::nullopt);

  static Model from_params(ModelSpec spec, std::span<const double> natural,
                           std::optional<TruncationWindow> window = std::nullopt);

  const ModelSpec& spec() const { return spec_; }
  const Mixture& mixture() const { return mixture_; }
  const std::optional<TruncationWindow>& window() const { return window_; }
  const std::optional<TruncatedMixture>& truncated() const { return truncated_; }

  std::vector<double> params() const;
  std::vector<std::string> param_names() const;

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  double pdf_y(double y) const;
  double log_pdf_y(double y) const;
  double cdf_y(double y) const;
  void log_pdf_y(std::span<const double> y, std::span<double> out) const;

  /// Sum of x-space log densities.
  double log_likelihood(std::span<const double> x) const;

  /// Same model with components in canonical order.
  Model canonical() const;

 private:
  ModelSpec spec_;
  Mixture mixture_;
  std::optional<TruncationWindow> window_;
  std::optional<TruncatedMixture> truncated_;
};

/// Natural parameter names for a spec, e.g. {"mu1","sigma1",...,"p1"}.
std::vector<std::string> param_names(const ModelSpec& spec);

}  // namespace compdist
