#pragma once

// The six base size distributions on x > 0.
//
// Every family is parameterized so that its density is most naturally written
// in the log variable y = ln x; the x-space density follows from the Jacobian
// f_x(x) = f_y(ln x) / x. Estimation works in y-space, reports in x-space.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

namespace compdist {

enum class BaseFamily {
  kLogNormal,
  kDoubleParetoLogNormal,
  kGeneralizedBeta2,
  kLogSemiNonparametric,
  kLogLogistic,
  kLogStudent,
};

std::string_view family_name(BaseFamily family);

/// Hermite polynomials h_1..h_4 (probabilists' convention).
double hermite_h(int k, double z);

namespace detail {

inline double checked_log(double x) {
  if (!(x > 0.0)) throw std::domain_error("size variable must be positive");
  return std::log(x);
}

// x-space accessors shared by every family.
template <class Derived>
class LogScaleDensity {
 public:
  double pdf_y(double y) const { return std::exp(self().log_pdf_y(y)); }
  double log_pdf(double x) const {
    const double y = checked_log(x);
    return self().log_pdf_y(y) - y;
  }
  double pdf(double x) const {
    const double y = checked_log(x);
    return self().pdf_y(y) / x;
  }
  double cdf(double x) const { return self().cdf_y(checked_log(x)); }

  void log_pdf_y(std::span<const double> y, std::span<double> out) const {
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = self().log_pdf_y(y[i]);
  }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

}  // namespace detail

class LogNormal : public detail::LogScaleDensity<LogNormal> {
 public:
  static constexpr BaseFamily kFamily = BaseFamily::kLogNormal;
  static constexpr std::size_t kParamCount = 2;
  static constexpr std::array<std::string_view, 2> kParamNames{"mu", "sigma"};

  LogNormal(double mu, double sigma);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  std::array<double, 2> params() const { return {mu_, sigma_}; }

  using LogScaleDensity::log_pdf_y;
  double log_pdf_y(double y) const;
  double cdf_y(double y) const;
  /// d/dy log f_y.
  double score_y(double y) const;

 private:
  double mu_;
  double sigma_;
  double log_sigma_;
};

/// Double Pareto lognormal: exp of a normal plus an asymmetric Laplace.
class DoubleParetoLogNormal : public detail::LogScaleDensity<DoubleParetoLogNormal> {
 public:
  static constexpr BaseFamily kFamily = BaseFamily::kDoubleParetoLogNormal;
  static constexpr std::size_t kParamCount = 4;
  static constexpr std::array<std::string_view, 4> kParamNames{"alpha", "beta", "mu", "sigma"};

  DoubleParetoLogNormal(double alpha, double beta, double mu, double sigma);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  std::array<double, 4> params() const { return {alpha_, beta_, mu_, sigma_}; }

  using LogScaleDensity::log_pdf_y;
  double log_pdf_y(double y) const;
  double cdf_y(double y) const;

 private:
  double alpha_;
  double beta_;
  double mu_;
  double sigma_;
  double log_front_;
};

/// Generalized beta of the second kind.
class GeneralizedBeta2 : public detail::LogScaleDensity<GeneralizedBeta2> {
 public:
  static constexpr BaseFamily kFamily = BaseFamily::kGeneralizedBeta2;
  static constexpr std::size_t kParamCount = 4;
  static constexpr std::array<std::string_view, 4> kParamNames{"a", "b", "p", "q"};

  GeneralizedBeta2(double a, double b, double p, double q);

  double a() const { return a_; }
  double b() const { return b_; }
  double p() const { return p_; }
  double q() const { return q_; }
  std::array<double, 4> params() const { return {a_, b_, p_, q_}; }

  using LogScaleDensity::log_pdf_y;
  double log_pdf_y(double y) const;
  double cdf_y(double y) const;

 private:
  double a_;
  double b_;
  double p_;
  double q_;
  double log_a_;
  double log_b_;
  double log_beta_pq_;
};

/// Lognormal times a degree-4 Hermite expansion. The density is signed: for
/// some coefficient vectors it dips below zero. pdf_y returns the signed
/// value; log_pdf_y returns -inf wherever the polynomial factor is <= 0.
class LogSemiNonparametric : public detail::LogScaleDensity<LogSemiNonparametric> {
 public:
  static constexpr BaseFamily kFamily = BaseFamily::kLogSemiNonparametric;
  static constexpr std::size_t kParamCount = 6;
  static constexpr std::array<std::string_view, 6> kParamNames{"mu", "sigma", "d1",
                                                               "d2", "d3",    "d4"};

  LogSemiNonparametric(double mu, double sigma, std::array<double, 4> d);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  const std::array<double, 4>& coefficients() const { return d_; }
  std::array<double, 6> params() const { return {mu_, sigma_, d_[0], d_[1], d_[2], d_[3]}; }

  using LogScaleDensity::log_pdf_y;
  double log_pdf_y(double y) const;
  double pdf_y(double y) const;
  double cdf_y(double y) const;

  /// 1 + sum_k d_k h_k(z).
  double polynomial(double z) const;
  /// True when the polynomial factor is positive on 2001 grid points of
  /// z in [-10, 10].
  bool is_feasible() const;

 private:
  double mu_;
  double sigma_;
  std::array<double, 4> d_;
  double log_sigma_;
};

class LogLogistic : public detail::LogScaleDensity<LogLogistic> {
 public:
  static constexpr BaseFamily kFamily = BaseFamily::kLogLogistic;
  static constexpr std::size_t kParamCount = 2;
  static constexpr std::array<std::string_view, 2> kParamNames{"mu", "sigma"};

  LogLogistic(double mu, double sigma);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  std::array<double, 2> params() const { return {mu_, sigma_}; }

  using LogScaleDensity::log_pdf_y;
  double log_pdf_y(double y) const;
  double cdf_y(double y) const;
  double score_y(double y) const;

 private:
  double mu_;
  double sigma_;
  double log_sigma_;
};

/// Log version of the non-standardized Student's t.
class LogStudent : public detail::LogScaleDensity<LogStudent> {
 public:
  static constexpr BaseFamily kFamily = BaseFamily::kLogStudent;
  static constexpr std::size_t kParamCount = 3;
  static constexpr std::array<std::string_view, 3> kParamNames{"mu", "sigma", "nu"};

  LogStudent(double mu, double sigma, double nu);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  double nu() const { return nu_; }
  std::array<double, 3> params() const { return {mu_, sigma_, nu_}; }

  using LogScaleDensity::log_pdf_y;
  double log_pdf_y(double y) const;
  double cdf_y(double y) const;
  double score_y(double y) const;

 private:
  double mu_;
  double sigma_;
  double nu_;
  double log_norm_;
};

using BaseDistribution = std::variant<LogNormal, DoubleParetoLogNormal, GeneralizedBeta2,
                                      LogSemiNonparametric, LogLogistic, LogStudent>;

BaseFamily family_of(const BaseDistribution& d);

double log_pdf_y(const BaseDistribution& d, double y);
double pdf_y(const BaseDistribution& d, double y);
double cdf_y(const BaseDistribution& d, double y);
void log_pdf_y(const BaseDistribution& d, std::span<const double> y, std::span<double> out);

double log_pdf(const BaseDistribution& d, double x);
double pdf(const BaseDistribution& d, double x);
double cdf(const BaseDistribution& d, double x);

/// Natural parameters in the order of the family's kParamNames.
std::vector<double> params_of(const BaseDistribution& d);

/// Builds a family member from its natural parameters.
BaseDistribution make_base(BaseFamily family, std::span<const double> params);

/// Rough (center, spread) of the distribution of y, used for quadrature
/// ranges, root brackets and plotting grids.
std::pair<double, double> y_extent(const BaseDistribution& d);

/// Inverse of cdf_y by bracketed bisection/secant; p in (0, 1).
double quantile_y(const BaseDistribution& d, double p);

}  // namespace compdist
