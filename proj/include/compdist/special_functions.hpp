#pragma once

// Scalar special functions used by the distribution CDFs.
//
// Accuracy targets (double precision):
//   erf / erfc / std_normal_cdf     relative error <= 1e-14
//   reg_inc_beta                    relative error <= 1e-12
//   gauss_2f1_student               agrees with the incomplete-beta route to 1e-12
//
// Every function is pure and reentrant.

namespace compdist::special {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double erf(double x);
double erfc(double x);

/// Scaled complementary error function exp(x^2) erfc(x). Finite for all
/// x >= -26; overflows to +inf below that.
double erfcx(double x);

/// log Gamma(x) for x > 0; throws std::domain_error otherwise.
double log_gamma(double x);

double log_beta(double p, double q);

/// B(p, q) = Gamma(p) Gamma(q) / Gamma(p + q); p, q > 0.
double beta_fn(double p, double q);

/// Regularized incomplete beta I_z(p, q) for z in [0, 1].
double reg_inc_beta(double z, double p, double q);

/// Same as reg_inc_beta but takes 1 - z explicitly so callers that know the
/// complement to full precision (e.g. logistic transforms) do not lose it.
double reg_inc_beta(double z, double one_minus_z, double p, double q);

/// 2F1(1/2, (1 + nu)/2; 3/2; u) restricted to u <= 0, the only branch the
/// Student-t CDF needs.
double gauss_2f1_student(double u, double nu);

double std_normal_pdf(double z);
double std_normal_cdf(double z);
/// log Phi(z), accurate deep into the lower tail.
double log_std_normal_cdf(double z);
/// Phi^{-1}(p) for p in (0, 1).
double std_normal_quantile(double p);

/// Normalizing constant Gamma((nu+1)/2) / (Gamma(nu/2) sqrt(pi nu)) of the
/// standard Student-t density.
double student_log_norm(double nu);

/// Standard Student-t CDF via the hypergeometric representation (small |t|)
/// and the incomplete-beta tail form elsewhere.
double student_cdf(double t, double nu);

/// Standard Student-t CDF computed only through reg_inc_beta.
double student_cdf_incbeta(double t, double nu);

}  // namespace compdist::special
