#include "compdist/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace compdist::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr double kSqrtPi = 1.77245385090551602730;

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double z, double one_minus_z, double p, double q) {
  constexpr int kMaxIter = 20000;
  const double qab = p + q;
  const double qap = p + 1.0;
  const double qam = p - 1.0;
  double c = 1.0;
  double d = z < 0.5 ? 1.0 - qab * z / qap : (1.0 - q + qab * one_minus_z) / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (q - m) * z / ((qam + m2) * (p + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(p + m) * (qab + m) * z / ((p + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 0.5 * kEps) return h;
  }
  return h;
}

// Stirling remainder ln Gamma(x) - [(x - 1/2) ln x - x + ln sqrt(2 pi)], x >= 10.
double stirling_remainder(double x) {
  const double r = 1.0 / (x * x);
  return (1.0 / 12.0 -
          r * (1.0 / 360.0 -
               r * (1.0 / 1260.0 -
                    r * (1.0 / 1680.0 - r * (1.0 / 1188.0 - r * (691.0 / 360360.0 - r / 156.0)))))) /
         x;
}

// z^p (1-z)^q / (p B(p,q)), the prefactor in front of the continued fraction.
double inc_beta_front(double z, double one_minus_z, double p, double q) {
  const double log_z = z < 0.5 ? std::log(z) : std::log1p(-one_minus_z);
  const double log_1mz = one_minus_z < 0.5 ? std::log(one_minus_z) : std::log1p(-z);
  return std::exp(p * log_z + q * log_1mz - log_beta(p, q)) / p;
}

}  // namespace

double erf(double x) { return std::erf(x); }

double erfc(double x) { return std::erfc(x); }

double erfcx(double x) {
  if (x < 10.0) {
    if (x < -26.7) return std::numeric_limits<double>::infinity();
    return std::exp(x * x) * std::erfc(x);
  }
  // Asymptotic series sum_k (-1)^k (2k-1)!! / (2x^2)^k; 12 terms reach
  // double precision for x >= 10.
  const double inv = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term *= -(2.0 * k - 1.0) * inv;
    sum += term;
  }
  return sum / (x * kSqrtPi);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_beta(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw std::domain_error("beta: arguments must be positive");
  const double big = std::max(p, q);
  const double small = std::min(p, q);
  if (big < 10.0) return log_gamma(p) + log_gamma(q) - log_gamma(p + q);
  // ln Gamma(big) - ln Gamma(big + small) without cancelling large terms.
  const double diff = -(big - 0.5) * std::log1p(small / big) - small * std::log(big + small) + small +
                      stirling_remainder(big) - stirling_remainder(big + small);
  return log_gamma(small) + diff;
}

double beta_fn(double p, double q) { return std::exp(log_beta(p, q)); }

double reg_inc_beta(double z, double p, double q) { return reg_inc_beta(z, 1.0 - z, p, q); }

double reg_inc_beta(double z, double one_minus_z, double p, double q) {
  if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("reg_inc_beta: z outside [0, 1]");
  if (!(p > 0.0) || !(q > 0.0)) throw std::domain_error("reg_inc_beta: shape parameters must be positive");
  if (z == 0.0) return 0.0;
  if (one_minus_z <= 0.0) return 1.0;
  // The continued fraction converges fastest below (p+1)/(p+q+2); above it,
  // evaluate the complement with the roles of p and q swapped.
  if (z < (p + 1.0) / (p + q + 2.0)) {
    return inc_beta_front(z, one_minus_z, p, q) * beta_continued_fraction(z, one_minus_z, p, q);
  }
  const double complement =
      inc_beta_front(one_minus_z, z, q, p) * beta_continued_fraction(one_minus_z, z, q, p);
  return 1.0 - complement;
}

double student_log_norm(double nu) {
  return -log_beta(0.5 * nu, 0.5) - 0.5 * std::log(nu);
}

double gauss_2f1_student(double u, double nu) {
  if (u > 0.0) throw std::domain_error("gauss_2f1_student: u must be <= 0");
  if (!(nu > 0.0)) throw std::domain_error("gauss_2f1_student: nu must be positive");
  if (u == 0.0) return 1.0;
  const double b = 0.5 * (1.0 + nu);
  if (u >= -0.5 && -b * u < 500.0) {
    // Pfaff: 2F1(1/2, b; 3/2; u) = (1-u)^(-b) 2F1(1, b; 3/2; w), w = u/(u-1)
    // in [0, 1/3]. The transformed series has positive terms, so there is no
    // cancellation for large nu.
    const double w = u / (u - 1.0);
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < 5000; ++n) {
      term *= (b + n) / (1.5 + n) * w;
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::exp(std::log(sum) - b * std::log1p(-u));
  }
  // 2F1(1/2, (1+nu)/2; 3/2; -t^2/nu) = I_{t^2/(nu+t^2)}(1/2, nu/2) / (2 c t),
  // c the Student normalizing constant.
  const double t = std::sqrt(-u * nu);
  const double x = -u / (1.0 - u);
  const double one_minus_x = 1.0 / (1.0 - u);
  const double ib = reg_inc_beta(x, one_minus_x, 0.5, 0.5 * nu);
  return ib / (2.0 * std::exp(student_log_norm(nu)) * t);
}

double student_cdf_incbeta(double t, double nu) {
  if (t == 0.0) return 0.5;
  const double t2 = t * t;
  const double x = nu / (nu + t2);
  const double one_minus_x = t2 / (nu + t2);
  const double tail = 0.5 * reg_inc_beta(x, one_minus_x, 0.5 * nu, 0.5);
  return t > 0.0 ? 1.0 - tail : tail;
}

double student_cdf(double t, double nu) {
  if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
  const double u = -t * t / nu;
  // 0.5 + c t 2F1 cancels in the lower tail; beyond |t| = 1.5 the tail is
  // taken from the incomplete beta, which keeps relative accuracy. For very
  // large nu the continued fraction is itself ill-conditioned near z = 1.
  if (u >= -0.5 && (std::fabs(t) <= 1.5 || nu > 1e4)) {
    return std::clamp(0.5 + std::exp(student_log_norm(nu)) * t * gauss_2f1_student(u, nu), 0.0, 1.0);
  }
  return student_cdf_incbeta(t, nu);
}

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z - kLogSqrt2Pi); }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double log_std_normal_cdf(double z) {
  if (z > -5.0) {
    if (z > 0.0) return std::log1p(-0.5 * std::erfc(z / kSqrt2));
    return std::log(0.5 * std::erfc(-z / kSqrt2));
  }
  return std::log(0.5 * erfcx(-z / kSqrt2)) - 0.5 * z * z;
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw std::domain_error("std_normal_quantile: p outside [0, 1]");
  }
  // Acklam's rational approximation followed by Halley refinement.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    // Work on whichever tail keeps the residual well conditioned.
    const double e = x < 0.0 ? std_normal_cdf(x) - p : (1.0 - p) - 0.5 * std::erfc(x / kSqrt2);
    const double u = e / std_normal_pdf(x);
    x = x - u / (1.0 + 0.5 * x * u);
  }
  return x;
}

}  // namespace compdist::special
