#pragma once

// Doubly truncated ("tt") densities. A base density g on (0, inf) restricted
// to [a, b] becomes g(x) / (cdf(b) - cdf(a)). Mixtures are truncated
// component by component and then recombined with the original weights.

#include <span>
#include <vector>

#include "compdist/distributions.hpp"
#include "compdist/mixture.hpp"

namespace compdist {

class TruncationWindow {
 public:
  /// Requires 0 < a < b < inf.
  TruncationWindow(double a, double b);

  /// Numerically unbounded window [1e-300, 1e300].
  static TruncationWindow identity();

  double a() const { return a_; }
  double b() const { return b_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  bool contains(double x) const { return x >= a_ && x <= b_; }
  bool contains_y(double y) const { return y >= y_min_ && y <= y_max_; }

  friend bool operator==(const TruncationWindow&, const TruncationWindow&) = default;

 private:
  double a_;
  double b_;
  double y_min_;
  double y_max_;
};

/// Probability the base distribution assigns to the window. Throws
/// MassTooSmall when it does not exceed 1e-300.
double window_mass(const BaseDistribution& base, const TruncationWindow& window);

/// Unnormalized probability of [y_min, y] for y inside the window.
double window_mass_below(const BaseDistribution& base, const TruncationWindow& window, double y);

/// True when upper-window probabilities are taken from the reflected lower
/// tail (symmetric location-scale families with y_min above the center).
bool reflect_window(const BaseDistribution& base, const TruncationWindow& window);

double truncate_pdf(const BaseDistribution& base, const TruncationWindow& window, double x);
double truncate_log_pdf(const BaseDistribution& base, const TruncationWindow& window, double x);
double truncate_cdf(const BaseDistribution& base, const TruncationWindow& window, double x);

/// Component-wise truncated mixture.
class TruncatedMixture {
 public:
  TruncatedMixture(Mixture mixture, TruncationWindow window);

  const Mixture& mixture() const { return mixture_; }
  const TruncationWindow& window() const { return window_; }
  /// Per-component window masses.
  const std::vector<double>& masses() const { return masses_; }

  double pdf_y(double y) const;
  double log_pdf_y(double y) const;
  double cdf_y(double y) const;
  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  void log_pdf_y(std::span<const double> y, std::span<double> out) const;

  /// Component i truncated: density and cdf in y.
  double component_pdf_y(std::size_t i, double y) const;
  double component_cdf_y(std::size_t i, double y) const;

 private:
  Mixture mixture_;
  TruncationWindow window_;
  std::vector<double> masses_;
  std::vector<double> log_masses_;
};

TruncatedMixture truncate_mixture(const Mixture& mixture, const TruncationWindow& window);

/// The alternative construction: mix first, then truncate the pooled density.
double pooled_truncated_pdf(const Mixture& mixture, const TruncationWindow& window, double x);
double pooled_truncated_cdf(const Mixture& mixture, const TruncationWindow& window, double x);

enum class RoundingRule { kFloor, kCeil, kNearest };

struct EmpiricalWindow {
  TruncationWindow window;
  std::vector<double> survivors;
  std::size_t dropped_low = 0;
  std::size_t dropped_high = 0;
};

/// Drops the lowest round(n * lower_frac) and highest round(n * upper_frac)
/// observations of an ascending sample; the window spans the survivors,
/// bounds inclusive.
EmpiricalWindow empirical_window(std::span<const double> sorted, double lower_frac = 0.10,
                                 double upper_frac = 0.001,
                                 RoundingRule rule = RoundingRule::kFloor);

/// Number of observations removed from one tail under `rule`.
std::size_t tail_drop_count(std::size_t n, double frac, RoundingRule rule);

}  // namespace compdist
