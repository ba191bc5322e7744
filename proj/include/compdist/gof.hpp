#pragma once

// Goodness-of-fit distances between a sample and a fitted model, plus the
// two-sample versions used for the in-sample/out-of-sample comparison.
//
// The one-sample statistics take the model cdf evaluated at the order
// statistics, u_(1) <= ... <= u_(n).

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace compdist {

class Model;

struct GofReport {
  double ks = 0.0;
  double cm = 0.0;
  double ad = 0.0;
  std::size_t n = 0;
  /// Some cdf value was 0 or 1 and was clamped into [1e-15, 1 - 1e-15] for AD.
  bool ad_clamped = false;
};

double ks_stat(std::span<const double> u);
double cm_stat(std::span<const double> u);

struct AdStat {
  double value = 0.0;
  bool clamped = false;
};
AdStat ad_stat(std::span<const double> u);

/// Model cdf at each element of an ascending sample.
std::vector<double> cdf_values(std::span<const double> sorted,
                               const std::function<double(double)>& cdf);

GofReport gof_report(std::span<const double> sorted, const std::function<double(double)>& cdf);
/// Sorts a copy of `x` and evaluates against the model's x-space cdf.
GofReport gof_report(std::span<const double> x, const Model& model);

struct TwoSampleStats {
  double ks = 0.0;
  double cm = 0.0;
  double ad = 0.0;
};

struct TwoSampleResult {
  TwoSampleStats stats;
  double p_ks = 1.0;
  double p_cm = 1.0;
  double p_ad = 1.0;
  int n_perm = 0;
};

/// Two-sample KS, Cramer-von Mises (Anderson 1962) and Anderson-Darling
/// (Pettitt 1976) statistics, ties handled through the pooled step function.
TwoSampleStats two_sample_stats(std::span<const double> a, std::span<const double> b);

/// Statistics plus permutation p-values (1 + #{perm >= observed}) / (n_perm + 1).
TwoSampleResult two_sample_tests(std::span<const double> a, std::span<const double> b,
                                 int n_perm = 999, std::uint64_t seed = 0);

}  // namespace compdist
