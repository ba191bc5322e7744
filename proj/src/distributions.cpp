#include "compdist/distributions.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "compdist/special_functions.hpp"

namespace compdist {

namespace sf = special;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be positive and finite");
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(what) + " must be finite");
}

// log(1 + e^s) without overflow.
double softplus(double s) { return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

// log( exp(a^2/2 - a w) * Phi(w - a) ), the building block of the DPLN
// density. Uses erfcx where the naive product would overflow.
double log_exp_times_phi(double a, double w) {
  const double v = (a - w) / sf::kSqrt2;
  if (v > 0.0) return -0.5 * w * w + std::log(0.5 * sf::erfcx(v));
  return 0.5 * a * a - a * w + std::log(0.5 * std::erfc(v));
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (a == kNegInf) return kNegInf;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

std::string_view family_name(BaseFamily family) {
  switch (family) {
    case BaseFamily::kLogNormal: return "LN";
    case BaseFamily::kDoubleParetoLogNormal: return "DPLN";
    case BaseFamily::kGeneralizedBeta2: return "GB2";
    case BaseFamily::kLogSemiNonparametric: return "LNSNP";
    case BaseFamily::kLogLogistic: return "LL";
    case BaseFamily::kLogStudent: return "LSt";
  }
  return "?";
}

double hermite_h(int k, double z) {
  const double z2 = z * z;
  switch (k) {
    case 1: return z;
    case 2: return z2 - 1.0;
    case 3: return z * (z2 - 3.0);
    case 4: return z2 * (z2 - 6.0) + 3.0;
    default: throw std::out_of_range("hermite_h: degree must be in 1..4");
  }
}

// ---------------------------------------------------------------- LogNormal

LogNormal::LogNormal(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  require_finite(mu, "mu");
  require_positive(sigma, "sigma");
  log_sigma_ = std::log(sigma);
}

double LogNormal::log_pdf_y(double y) const {
  const double w = (y - mu_) / sigma_;
  return -0.5 * w * w - log_sigma_ - sf::kLogSqrt2Pi;
}

double LogNormal::cdf_y(double y) const { return sf::std_normal_cdf((y - mu_) / sigma_); }

double LogNormal::score_y(double y) const { return -(y - mu_) / (sigma_ * sigma_); }

// ---------------------------------------------------------------- DPLN

DoubleParetoLogNormal::DoubleParetoLogNormal(double alpha, double beta, double mu, double sigma)
    : alpha_(alpha), beta_(beta), mu_(mu), sigma_(sigma) {
  require_positive(alpha, "alpha");
  require_positive(beta, "beta");
  require_finite(mu, "mu");
  require_positive(sigma, "sigma");
  log_front_ = std::log(alpha) + std::log(beta) - std::log(alpha + beta);
}

double DoubleParetoLogNormal::log_pdf_y(double y) const {
  const double w = (y - mu_) / sigma_;
  const double upper = log_exp_times_phi(alpha_ * sigma_, w);
  const double lower = log_exp_times_phi(beta_ * sigma_, -w);
  return log_front_ + log_add_exp(upper, lower);
}

double DoubleParetoLogNormal::cdf_y(double y) const {
  const double w = (y - mu_) / sigma_;
  const double upper = std::exp(log_exp_times_phi(alpha_ * sigma_, w));
  const double lower = std::exp(log_exp_times_phi(beta_ * sigma_, -w));
  const double sum = alpha_ + beta_;
  const double value = sf::std_normal_cdf(w) - beta_ / sum * upper + alpha_ / sum * lower;
  return std::clamp(value, 0.0, 1.0);
}

// ---------------------------------------------------------------- GB2

GeneralizedBeta2::GeneralizedBeta2(double a, double b, double p, double q)
    : a_(a), b_(b), p_(p), q_(q) {
  require_positive(a, "a");
  require_positive(b, "b");
  require_positive(p, "p");
  require_positive(q, "q");
  log_a_ = std::log(a);
  log_b_ = std::log(b);
  log_beta_pq_ = sf::log_beta(p, q);
}

double GeneralizedBeta2::log_pdf_y(double y) const {
  const double s = a_ * (y - log_b_);
  return log_a_ + p_ * s - log_beta_pq_ - (p_ + q_) * softplus(s);
}

double GeneralizedBeta2::cdf_y(double y) const {
  const double s = a_ * (y - log_b_);
  if (s == std::numeric_limits<double>::infinity()) return 1.0;
  if (s == kNegInf) return 0.0;
  // z = (x/b)^a / (1 + (x/b)^a) and its complement, both to full precision.
  const double z = 1.0 / (1.0 + std::exp(-s));
  const double one_minus_z = 1.0 / (1.0 + std::exp(s));
  return sf::reg_inc_beta(z, one_minus_z, p_, q_);
}

// ---------------------------------------------------------------- LNSNP

LogSemiNonparametric::LogSemiNonparametric(double mu, double sigma, std::array<double, 4> d)
    : mu_(mu), sigma_(sigma), d_(d) {
  require_finite(mu, "mu");
  require_positive(sigma, "sigma");
  for (double v : d) require_finite(v, "Hermite coefficient");
  log_sigma_ = std::log(sigma);
}

double LogSemiNonparametric::polynomial(double z) const {
  return 1.0 + d_[0] * hermite_h(1, z) + d_[1] * hermite_h(2, z) + d_[2] * hermite_h(3, z) +
         d_[3] * hermite_h(4, z);
}

bool LogSemiNonparametric::is_feasible() const {
  for (int i = 0; i <= 2000; ++i) {
    const double z = -10.0 + 0.01 * i;
    if (!(polynomial(z) > 0.0)) return false;
  }
  return true;
}

double LogSemiNonparametric::log_pdf_y(double y) const {
  const double w = (y - mu_) / sigma_;
  const double poly = polynomial(w);
  if (!(poly > 0.0)) return kNegInf;
  return -0.5 * w * w - log_sigma_ - sf::kLogSqrt2Pi + std::log(poly);
}

double LogSemiNonparametric::pdf_y(double y) const {
  const double w = (y - mu_) / sigma_;
  return sf::std_normal_pdf(w) / sigma_ * polynomial(w);
}

double LogSemiNonparametric::cdf_y(double y) const {
  // int_{-inf}^{w} h_k(t) phi(t) dt = -h_{k-1}(w) phi(w), with h_0 = 1.
  const double w = (y - mu_) / sigma_;
  if (std::isinf(w)) return w > 0.0 ? 1.0 : 0.0;
  const double tail = d_[0] + d_[1] * hermite_h(1, w) + d_[2] * hermite_h(2, w) +
                      d_[3] * hermite_h(3, w);
  return sf::std_normal_cdf(w) - sf::std_normal_pdf(w) * tail;
}

// ---------------------------------------------------------------- LogLogistic

LogLogistic::LogLogistic(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  require_finite(mu, "mu");
  require_positive(sigma, "sigma");
  log_sigma_ = std::log(sigma);
}

double LogLogistic::log_pdf_y(double y) const {
  const double aw = std::fabs((y - mu_) / sigma_);
  return -aw - log_sigma_ - 2.0 * std::log1p(std::exp(-aw));
}

double LogLogistic::cdf_y(double y) const {
  const double w = (y - mu_) / sigma_;
  return 1.0 / (1.0 + std::exp(-w));
}

double LogLogistic::score_y(double y) const {
  const double w = (y - mu_) / sigma_;
  return -std::tanh(0.5 * w) / sigma_;
}

// ---------------------------------------------------------------- LogStudent

LogStudent::LogStudent(double mu, double sigma, double nu) : mu_(mu), sigma_(sigma), nu_(nu) {
  require_finite(mu, "mu");
  require_positive(sigma, "sigma");
  require_positive(nu, "nu");
  log_norm_ = sf::student_log_norm(nu) - std::log(sigma);
}

double LogStudent::log_pdf_y(double y) const {
  const double w = (y - mu_) / sigma_;
  return log_norm_ - 0.5 * (nu_ + 1.0) * std::log1p(w * w / nu_);
}

double LogStudent::cdf_y(double y) const { return sf::student_cdf((y - mu_) / sigma_, nu_); }

double LogStudent::score_y(double y) const {
  const double d = y - mu_;
  return -(nu_ + 1.0) * d / (nu_ * sigma_ * sigma_ + d * d);
}

// ---------------------------------------------------------------- variant API

BaseFamily family_of(const BaseDistribution& d) {
  return std::visit([](const auto& v) { return std::decay_t<decltype(v)>::kFamily; }, d);
}

double log_pdf_y(const BaseDistribution& d, double y) {
  return std::visit([y](const auto& v) { return v.log_pdf_y(y); }, d);
}

double pdf_y(const BaseDistribution& d, double y) {
  return std::visit([y](const auto& v) { return v.pdf_y(y); }, d);
}

double cdf_y(const BaseDistribution& d, double y) {
  return std::visit([y](const auto& v) { return v.cdf_y(y); }, d);
}

void log_pdf_y(const BaseDistribution& d, std::span<const double> y, std::span<double> out) {
  std::visit([&](const auto& v) { v.log_pdf_y(y, out); }, d);
}

double log_pdf(const BaseDistribution& d, double x) {
  return std::visit([x](const auto& v) { return v.log_pdf(x); }, d);
}

double pdf(const BaseDistribution& d, double x) {
  return std::visit([x](const auto& v) { return v.pdf(x); }, d);
}

double cdf(const BaseDistribution& d, double x) {
  return std::visit([x](const auto& v) { return v.cdf(x); }, d);
}

std::vector<double> params_of(const BaseDistribution& d) {
  return std::visit(
      [](const auto& v) {
        const auto p = v.params();
        return std::vector<double>(p.begin(), p.end());
      },
      d);
}

BaseDistribution make_base(BaseFamily family, std::span<const double> p) {
  auto need = [&](std::size_t n) {
    if (p.size() != n) throw std::invalid_argument("make_base: wrong parameter count");
  };
  switch (family) {
    case BaseFamily::kLogNormal: need(2); return LogNormal(p[0], p[1]);
    case BaseFamily::kDoubleParetoLogNormal: need(4); return DoubleParetoLogNormal(p[0], p[1], p[2], p[3]);
    case BaseFamily::kGeneralizedBeta2: need(4); return GeneralizedBeta2(p[0], p[1], p[2], p[3]);
    case BaseFamily::kLogSemiNonparametric:
      need(6);
      return LogSemiNonparametric(p[0], p[1], {p[2], p[3], p[4], p[5]});
    case BaseFamily::kLogLogistic: need(2); return LogLogistic(p[0], p[1]);
    case BaseFamily::kLogStudent: need(3); return LogStudent(p[0], p[1], p[2]);
  }
  throw std::invalid_argument("make_base: unknown family");
}

std::pair<double, double> y_extent(const BaseDistribution& d) {
  struct Visitor {
    std::pair<double, double> operator()(const LogNormal& v) const { return {v.mu(), v.sigma()}; }
    std::pair<double, double> operator()(const DoubleParetoLogNormal& v) const {
      const double ia = 1.0 / v.alpha();
      const double ib = 1.0 / v.beta();
      return {v.mu() + ia - ib, std::sqrt(v.sigma() * v.sigma() + ia * ia + ib * ib)};
    }
    std::pair<double, double> operator()(const GeneralizedBeta2& v) const {
      namespace bm = boost::math;
      const double center = std::log(v.b()) + (bm::digamma(v.p()) - bm::digamma(v.q())) / v.a();
      return {center, std::sqrt(bm::trigamma(v.p()) + bm::trigamma(v.q())) / v.a()};
    }
    std::pair<double, double> operator()(const LogSemiNonparametric& v) const {
      return {v.mu(), v.sigma()};
    }
    std::pair<double, double> operator()(const LogLogistic& v) const {
      return {v.mu(), v.sigma() * sf::kPi / std::sqrt(3.0)};
    }
    std::pair<double, double> operator()(const LogStudent& v) const {
      const double inflate = v.nu() > 2.5 ? std::sqrt(v.nu() / (v.nu() - 2.0)) : 3.0;
      return {v.mu(), v.sigma() * inflate};
    }
  };
  return std::visit(Visitor{}, d);
}

double quantile_y(const BaseDistribution& d, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile_y: p must lie in (0, 1)");
  const auto [center, spread] = y_extent(d);
  double lo = center - spread;
  double hi = center + spread;
  double step = spread;
  for (int i = 0; i < 200 && cdf_y(d, lo) > p; ++i) {
    step *= 2.0;
    lo -= step;
  }
  step = spread;
  for (int i = 0; i < 200 && cdf_y(d, hi) < p; ++i) {
    step *= 2.0;
    hi += step;
  }
  boost::uintmax_t max_iter = 200;
  auto fn = [&](double y) { return cdf_y(d, y) - p; };
  const auto r = boost::math::tools::toms748_solve(
      fn, lo, hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
  return 0.5 * (r.first + r.second);
}

}  // namespace compdist
