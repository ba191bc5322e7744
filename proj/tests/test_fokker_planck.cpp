#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "compdist/errors.hpp"
#include "compdist/fokker_planck.hpp"
#include "compdist/gof.hpp"
#include "oracles.hpp"

using namespace compdist;

namespace {

// Density and cdf of the path at time t through the mixture/truncation
// classes, independent of the path's own derivative assembly.
double state_pdf(const PathState& st, double y) {
  if (st.truncated) return truncate_mixture(st.mixture(), *st.window()).pdf_y(y);
  return st.mixture().pdf_y(y);
}

double state_cdf(const PathState& st, double y) {
  if (st.truncated) return truncate_mixture(st.mixture(), *st.window()).cdf_y(y);
  return st.mixture().cdf_y(y);
}

// Five-point central difference.
template <class F>
double d5(F&& g, double x, double h) {
  return (g(x - 2.0 * h) - 8.0 * g(x - h) + 8.0 * g(x + h) - g(x + 2.0 * h)) / (12.0 * h);
}

// b = s^2/(2f) f_y - cdf_t / f with both partials by finite differences.
double fd_drift(const ParamPath& path, double s, double y, double t) {
  const double h = 1e-3;
  const PathState now = path.at(t);
  const double f = state_pdf(now, y);
  const double f_y = d5([&](double v) { return state_pdf(now, v); }, y, h);
  const double cdf_t = d5([&](double tt) { return state_cdf(path.at(tt), y); }, t, h);
  return s * s / (2.0 * f) * f_y - cdf_t / f;
}

std::vector<double> random_mixture(int ell, std::mt19937_64& rng, double mu_lo, double mu_hi) {
  std::vector<double> p;
  for (int i = 0; i < ell; ++i) {
    p.push_back(oracle::uniform(rng, mu_lo, mu_hi));
    p.push_back(oracle::uniform(rng, 0.4, 1.5));
  }
  std::vector<double> w(ell);
  double total = 0.0;
  for (auto& v : w) total += (v = oracle::uniform(rng, 0.2, 1.0));
  for (int i = 0; i + 1 < ell; ++i) p.push_back(w[i] / total);
  return p;
}

double sorted_ks(std::vector<double> y, const PathState& st) {
  std::sort(y.begin(), y.end());
  return gof_report(y, [&](double v) { return state_cdf(st, v); }).ks;
}

}  // namespace

TEST(GenericDrift, StaticStandardNormal) {
  const auto path = ParamPath::constant(ModelSpec::parse("LN"), {0.0, 1.0});
  const auto st = path.at(0.3);
  for (double s : {0.5, 1.0, 2.0}) {
    for (double y : {-3.0, -0.7, 0.0, 1.2, 4.0}) EXPECT_NEAR(generic_drift(st, s, y), -s * s * y / 2.0, 1e-12);
  }
}

TEST(GenericDrift, StaticLognormalZeroAtMode) {
  const auto path = ParamPath::constant(ModelSpec::parse("LN"), {6.5, 1.7});
  EXPECT_NEAR(generic_drift(path.at(0.0), 1.3, 6.5), 0.0, 1e-14);
}

TEST(GenericDrift, MovingNormal) {
  const ParamPath path(ModelSpec::parse("LN"), 0.0, 1.0, {1.0, 0.7}, {3.0, 0.7});
  const MixturePathDensity density(path);
  const double s = 0.8;
  for (double t : {0.1, 0.5, 0.9}) {
    const double mu = 1.0 + 2.0 * t;
    for (double y : {mu - 1.5, mu - 0.2, mu, mu + 0.9}) {
      const double b = generic_drift(density, s, y, t);
      EXPECT_NEAR(b, -s * s * (y - mu) / (2.0 * 0.49) + 2.0, 1e-12);
      EXPECT_NEAR(b, fd_drift(path, s, y, t), 1e-8);
    }
  }
}

TEST(GenericDrift, ZeroDensityThrows) {
  const auto path = ParamPath::constant(ModelSpec::parse("LN"), {0.0, 0.1});
  EXPECT_THROW(generic_drift(path.at(0.0), 1.0, 50.0), ZeroDensity);
}

TEST(KTerm, Limits) {
  EXPECT_EQ(k_term(2.0, 2.0, 0.7, 4.0, 1.3, 0.25, -0.4), 0.25);
  const double y = 3.1, mu = 2.0, sig = 0.7, s = 1.3, md = 0.25, sd = -0.4;
  const double normal = md + (y - mu) * sd / sig - s * s * (y - mu) / (2.0 * sig * sig);
  EXPECT_EQ(k_term(y, mu, sig, INFINITY, s, md, sd), normal);
  EXPECT_NEAR(k_term(y, mu, sig, 1e10, s, md, sd), normal, 1e-8);
}

TEST(KTerm, MatchesGenericDriftOnSingleStudent) {
  // 4LSt with all weight on the nu = 4 component, which moves.
  std::mt19937_64 rng(17);
  const auto spec = ModelSpec::parse("4LSt");
  for (int rep = 0; rep < 20; ++rep) {
    const double mu0 = oracle::uniform(rng, 1.0, 10.0), mu1 = oracle::uniform(rng, 1.0, 10.0);
    const double s0 = oracle::uniform(rng, 0.3, 2.0), s1 = oracle::uniform(rng, 0.3, 2.0);
    const std::vector<double> tail{5.0, 1.0, 6.0, 1.0, 7.0, 1.0, 1.0, 0.0, 0.0};
    std::vector<double> p0{mu0, s0}, p1{mu1, s1};
    p0.insert(p0.end(), tail.begin(), tail.end());
    p1.insert(p1.end(), tail.begin(), tail.end());
    const ParamPath path(spec, 0.0, 1.0, p0, p1);
    const double t = oracle::uniform(rng, 0.0, 1.0);
    const double s = oracle::uniform(rng, 0.2, 3.0);
    const auto st = path.at(t);
    const double y = st.mu[0] + st.sigma[0] * oracle::uniform(rng, -6.0, 6.0);
    const double k = k_term(y, st.mu[0], st.sigma[0], 4.0, s, st.mu_dot[0], st.sigma_dot[0]);
    EXPECT_NEAR(k, generic_drift(st, s, y), 1e-10 * std::max(1.0, std::fabs(k)));
  }
}

TEST(ClosedForm, FourLStSingleComponentScore) {
  const std::vector<double> p{3.0, 0.8, 5.0, 1.0, 6.0, 1.0, 7.0, 1.0, 1.0, 0.0, 0.0};
  const DriftField field(1.4, ParamPath::constant(ModelSpec::parse("4LSt"), p), DriftKind::kFourLSt);
  const double s = field.s;
  for (double y : {-1.0, 2.0, 3.0, 4.5, 9.0}) {
    const double expected = -s * s * 5.0 * (y - 3.0) / (2.0 * ((y - 3.0) * (y - 3.0) + 4.0 * 0.64));
    EXPECT_NEAR(drift_4lst(y, 0.5, field), expected, 1e-13);
  }
}

TEST(ClosedForm, FourLStMatchesGeneric) {
  std::mt19937_64 rng(4);
  const auto spec = ModelSpec::parse("4LSt");
  for (int rep = 0; rep < 10; ++rep) {
    const ParamPath path(spec, 0.0, 1.0, random_mixture(4, rng, 2.0, 10.0), random_mixture(4, rng, 2.0, 10.0));
    const DriftField field(oracle::uniform(rng, 0.3, 2.0), path, DriftKind::kFourLSt);
    for (int k = 0; k < 20; ++k) {
      const double t = oracle::uniform(rng, 0.0, 1.0);
      const double y = oracle::uniform(rng, 0.0, 12.0);
      const double b = drift_4lst(y, t, field);
      EXPECT_NEAR(b, generic_drift(path.at(t), field.s, y), 1e-9 * std::max(1.0, std::fabs(b)));
      if (k < 3) EXPECT_NEAR(b, fd_drift(path, field.s, y, t), 1e-7 * std::max(1.0, std::fabs(b)));
    }
  }
}

TEST(ClosedForm, FourLStStaticIsScoreTerm) {
  std::mt19937_64 rng(8);
  const auto spec = ModelSpec::parse("4LSt");
  const auto p = random_mixture(4, rng, 2.0, 10.0);
  const DriftField field(0.9, ParamPath::constant(spec, p), DriftKind::kFourLSt);
  const auto st = field.path.at(0.0);
  const Model m = Model::from_params(spec, p);
  for (double y : {1.0, 4.0, 7.5, 11.0}) {
    const auto tau = posteriors(st, y);
    double score = 0.0;
    for (std::size_t i = 0; i < 4; ++i) score += tau[i] * k_term(y, st.mu[i], st.sigma[i], st.nu[i], 0.9, 0.0, 0.0);
    EXPECT_NEAR(drift_4lst(y, 0.0, field), score, 1e-12);
    const double fy = d5([&](double v) { return m.pdf_y(v); }, y, 1e-3);
    EXPECT_NEAR(score, 0.81 / 2.0 * fy / m.pdf_y(y), 1e-8);
  }
}

TEST(ClosedForm, PosteriorsSumToOne) {
  std::mt19937_64 rng(6);
  const auto spec = ModelSpec::parse("4LSt");
  const ParamPath path(spec, 0.0, 1.0, random_mixture(4, rng, 1.0, 12.0), random_mixture(4, rng, 1.0, 12.0));
  for (int k = 0; k < 500; ++k) {
    const auto st = path.at(oracle::uniform(rng, 0.0, 1.0));
    const auto tau = posteriors(st, oracle::uniform(rng, -40.0, 60.0));
    for (double v : tau) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_NEAR(std::accumulate(tau.begin(), tau.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(ClosedForm, FiveLStTTMatchesGeneric) {
  std::mt19937_64 rng(12);
  const auto spec = ModelSpec::parse("5LSttt");
  for (int rep = 0; rep < 3; ++rep) {
    const TruncationWindow w0(std::exp(oracle::uniform(rng, 1.5, 2.5)), std::exp(oracle::uniform(rng, 10.5, 11.5)));
    const TruncationWindow w1(std::exp(oracle::uniform(rng, 1.5, 2.5)), std::exp(oracle::uniform(rng, 10.5, 11.5)));
    const ParamPath path(spec, 0.0, 1.0, random_mixture(5, rng, 3.0, 10.0), random_mixture(5, rng, 3.0, 10.0), w0, w1);
    const DriftField field(oracle::uniform(rng, 0.3, 2.0), path, DriftKind::kFiveLStTT);
    // 30 x 10 grid in (y, t), y inside every window along the path.
    for (int j = 0; j < 10; ++j) {
      const double t = 0.05 + 0.1 * j;
      const auto st = path.at(t);
      for (int i = 0; i < 30; ++i) {
        const double y = st.y_min + (st.y_max - st.y_min) * (i + 0.5) / 30.0;
        const double b = drift_5lsttt(y, t, field);
        EXPECT_NEAR(b, generic_drift(st, field.s, y), 1e-8 * std::max(1.0, std::fabs(b)));
      }
    }
    for (int k = 0; k < 5; ++k) {
      const double t = oracle::uniform(rng, 0.1, 0.9);
      const double y = oracle::uniform(rng, 3.0, 10.0);
      const double b = drift_5lsttt(y, t, field);
      EXPECT_NEAR(b, fd_drift(path, field.s, y, t), 1e-7 * std::max(1.0, std::fabs(b)));
    }
  }
}

TEST(ClosedForm, FiveLStTTSingleComponent) {
  // Frozen window and weights; only the first component moves.
  const auto spec = ModelSpec::parse("5LSttt");
  const std::vector<double> rest{6.0, 1.0, 7.0, 1.0, 8.0, 1.0, 9.0, 1.0, 1.0, 0.0, 0.0, 0.0};
  std::vector<double> p0{4.0, 0.9}, p1{6.0, 1.4};
  p0.insert(p0.end(), rest.begin(), rest.end());
  p1.insert(p1.end(), rest.begin(), rest.end());
  const TruncationWindow w(std::exp(2.0), std::exp(9.0));
  const ParamPath path(spec, 0.0, 1.0, p0, p1, w, w);
  const DriftField field(1.1, path, DriftKind::kFiveLStTT);
  for (double t : {0.2, 0.7}) {
    const auto st = path.at(t);
    for (double y : {2.3, 4.0, 6.1, 8.7}) {
      const double k = k_term_truncated(y, 2.0, 9.0, 0.0, 0.0, st.mu[0], st.sigma[0], 4.0, 1.1,
                                        st.mu_dot[0], st.sigma_dot[0]);
      EXPECT_NEAR(drift_5lsttt(y, t, field), k, 1e-10 * std::max(1.0, std::fabs(k)));
      EXPECT_NEAR(k, fd_drift(path, 1.1, y, t), 1e-7 * std::max(1.0, std::fabs(k)));
    }
  }
}

TEST(ClosedForm, FiveLStTTEdgesAndWindow) {
  std::mt19937_64 rng(3);
  const auto spec = ModelSpec::parse("5LSttt");
  const TruncationWindow w(std::exp(2.0), std::exp(11.0));
  const DriftField field(0.7, ParamPath::constant(spec, random_mixture(5, rng, 3.0, 10.0), w),
                         DriftKind::kFiveLStTT);
  EXPECT_TRUE(std::isfinite(drift_5lsttt(2.0, 0.5, field)));
  EXPECT_TRUE(std::isfinite(drift_5lsttt(11.0, 0.5, field)));
  EXPECT_THROW(drift_5lsttt(1.9, 0.5, field), OutOfWindow);
  EXPECT_THROW(drift_5lsttt(11.1, 0.5, field), OutOfWindow);
  EXPECT_THROW(drift_4lst(5.0, 0.5, field), std::invalid_argument);
}

TEST(ClosedForm, DriftSignIsIndefinite) {
  const auto spec = ModelSpec::parse("4LSt");
  const ParamPath path(spec, 0.0, 1.0, {2.0, 0.5, 5.0, 0.8, 8.0, 1.0, 11.0, 0.6, 0.3, 0.3, 0.2},
                       {3.0, 0.6, 5.5, 0.7, 8.5, 1.2, 10.0, 0.9, 0.2, 0.3, 0.3});
  const DriftField field(1.0, path, DriftKind::kFourLSt);
  int pos = 0, neg = 0;
  for (double t : {0.0, 0.5, 1.0}) {
    for (double y = 0.0; y <= 13.0; y += 0.25) {
      const double b = drift_4lst(y, t, field);
      pos += b > 0.0;
      neg += b < 0.0;
    }
  }
  EXPECT_GT(pos, 0);
  EXPECT_GT(neg, 0);
}

TEST(Residual, StaticSingleComponentSecondOrder) {
  const DriftField field(1.3, ParamPath::constant(ModelSpec::parse("LN"), {4.0, 0.9}), DriftKind::kGeneric);
  const std::vector<double> ys{2.5, 3.4, 4.3, 5.1, 6.0};
  const std::vector<double> ts{0.5};
  const auto study = fp_convergence(field, ys, ts, 0.08, 4);
  for (double o : study.order) EXPECT_GE(o, 1.8);
  EXPECT_LT(study.residual.back(), study.residual.front());
}

TEST(Residual, LinearFourLStPath) {
  const auto spec = ModelSpec::parse("4LSt");
  const ParamPath path(spec, 0.0, 1.0, {2.0, 0.5, 5.0, 0.8, 8.0, 1.0, 11.0, 0.6, 0.3, 0.3, 0.2},
                       {3.0, 0.6, 5.5, 0.7, 8.5, 1.2, 10.0, 0.9, 0.2, 0.3, 0.3});
  const DriftField field(0.8, path, DriftKind::kFourLSt);
  std::vector<double> ys;
  for (int i = 0; i <= 24; ++i) ys.push_back(0.5 + 0.5 * i);
  const std::vector<double> ts{0.2, 0.5, 0.8};
  const auto study = fp_convergence(field, ys, ts, 0.016, 4);
  EXPECT_GE(study.order.back(), 1.8);
  EXPECT_LE(fp_residual(field, ys, ts, 1e-3, 1e-3), 1e-4);
}

TEST(Residual, FiveLStTTPath) {
  const auto spec = ModelSpec::parse("5LSttt");
  std::mt19937_64 rng(2);
  const ParamPath path(spec, 0.0, 1.0, random_mixture(5, rng, 3.0, 10.0), random_mixture(5, rng, 3.0, 10.0),
                       TruncationWindow(std::exp(2.0), std::exp(11.0)), TruncationWindow(std::exp(2.4), std::exp(10.6)));
  const DriftField field(0.8, path, DriftKind::kFiveLStTT);
  std::vector<double> ys;
  for (int i = 0; i <= 20; ++i) ys.push_back(3.0 + 0.35 * i);
  const std::vector<double> ts{0.3, 0.6};
  EXPECT_LE(fp_residual(field, ys, ts, 1e-3, 1e-3), 1e-4);
}

TEST(Sde, BrownianVariance) {
  // sigma = 1e4 makes the score drift about 1e-8 |y|: Brownian motion.
  const DriftField field(1.0, ParamPath::constant(ModelSpec::parse("LN"), {0.0, 1e4}), DriftKind::kGeneric);
  const std::size_t n = 100000;
  SdeOptions opt;
  opt.n_steps = 200;
  const auto y = simulate_sde(field, std::vector<double>(n, 0.0), 0.0, 2.0, opt, {31, 0});
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1);
  EXPECT_NEAR(var, 2.0, 3.0 * 2.0 * std::sqrt(2.0 / n));
}

TEST(Sde, StaticFourLStStaysStationary) {
  const auto spec = ModelSpec::parse("4LSt");
  const std::vector<double> p{2.0, 0.5, 5.0, 0.8, 8.0, 1.0, 11.0, 0.6, 0.3, 0.3, 0.2};
  const DriftField field(0.6, ParamPath::constant(spec, p), DriftKind::kFourLSt);
  const std::size_t n = 20000;
  SdeOptions opt;
  opt.n_steps = 1000;
  const auto y0 = sample_path_y(field.path, 0.0, n, {41, 0});
  const auto y1 = simulate_sde(field, y0, 0.0, 1.0, opt, {41, 1});
  const auto fresh = sample_path_y(field.path, 1.0, n, {41, 2});
  EXPECT_GT(two_sample_tests(y1, fresh, 199, 5).p_ks, 0.01);
}

TEST(Sde, MovingThreeLnTransport) {
  const auto spec = ModelSpec::parse("3LN");
  const ParamPath path(spec, 0.0, 1.0, {3.0, 0.6, 6.0, 0.8, 9.0, 1.0, 0.3, 0.4},
                       {3.5, 0.7, 6.2, 0.9, 8.5, 0.8, 0.4, 0.3});
  const DriftField field(0.7, path, DriftKind::kGeneric);
  const std::size_t n = 40000;
  SdeOptions opt;
  opt.n_steps = 2000;
  const auto y1 = simulate_sde(field, sample_path_y(path, 0.0, n, {51, 0}), 0.0, 1.0, opt, {51, 1});
  EXPECT_LT(sorted_ks(y1, path.at(1.0)), 1.6276 / std::sqrt(static_cast<double>(n)));
}

TEST(Sde, TruncatedPathStaysInWindow) {
  const auto spec = ModelSpec::parse("5LSttt");
  std::mt19937_64 rng(9);
  const ParamPath path(spec, 0.0, 1.0, random_mixture(5, rng, 3.0, 10.0), random_mixture(5, rng, 3.0, 10.0),
                       TruncationWindow(std::exp(2.0), std::exp(11.0)), TruncationWindow(std::exp(2.5), std::exp(10.5)));
  const DriftField field(0.6, path, DriftKind::kFiveLStTT);
  const std::size_t n = 20000;
  SdeOptions opt;
  opt.n_steps = 1000;
  const auto y1 = simulate_sde(field, sample_path_y(path, 0.0, n, {61, 0}), 0.0, 1.0, opt, {61, 1});
  const auto st = path.at(1.0);
  EXPECT_GE(*std::min_element(y1.begin(), y1.end()), st.y_min);
  EXPECT_LE(*std::max_element(y1.begin(), y1.end()), st.y_max);
  EXPECT_LT(sorted_ks(y1, st), 1.6276 / std::sqrt(static_cast<double>(n)));
}
