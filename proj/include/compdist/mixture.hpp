#pragma once

#include <span>
#include <vector>

#include "compdist/distributions.hpp"

namespace compdist {

/// Finite mixture of components drawn from a single base family. A
/// one-component mixture is the plain base distribution.
class Mixture {
 public:
  /// `weights` holds all ell weights; each must lie in [0, 1] and they must
  /// sum to one within 1e-9.
  Mixture(std::vector<BaseDistribution> components, std::vector<double> weights);

  static Mixture single(BaseDistribution component);

  /// Builds a mixture from the ell - 1 free weights p_1..p_{ell-1}; the last
  /// weight is 1 - sum(p).
  static Mixture from_free_weights(std::vector<BaseDistribution> components,
                                   std::span<const double> free_weights);

  std::size_t size() const { return components_.size(); }
  BaseFamily family() const { return family_of(components_.front()); }
  const std::vector<BaseDistribution>& components() const { return components_; }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double> free_weights() const;

  double pdf_y(double y) const;
  double log_pdf_y(double y) const;
  double cdf_y(double y) const;

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;

  /// Batched y-space log-density via max-shifted log-sum-exp.
  void log_pdf_y(std::span<const double> y, std::span<double> out) const;

 private:
  std::vector<BaseDistribution> components_;
  std::vector<double> weights_;
};

/// Removes label switching: LN and LL mixtures get their components sorted by
/// ascending mu (weights permuted along); log-Student mixtures keep their
/// fixed-nu order. Density values are unchanged.
Mixture canonicalize(const Mixture& mixture);

/// Permutation that canonicalize applies: element i is the original index of
/// the component that ends up at position i.
std::vector<std::size_t> canonical_order(const Mixture& mixture);

}  // namespace compdist
