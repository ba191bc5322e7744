#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "compdist/errors.hpp"
#include "compdist/estimation.hpp"
#include "compdist/nelder_mead.hpp"
#include "compdist/sampling.hpp"

using namespace compdist;

namespace {

struct LogMoments {
  double mean;
  double sd;
};

LogMoments log_moments(const std::vector<double>& x) {
  long double s = 0.0L, s2 = 0.0L;
  for (double v : x) s += std::log(v);
  const long double m = s / x.size();
  for (double v : x) s2 += (std::log(v) - m) * (std::log(v) - m);
  return {static_cast<double>(m), static_cast<double>(std::sqrt(s2 / x.size()))};
}

FitConfig quick(int starts = 3) {
  FitConfig cfg;
  cfg.n_starts = starts;
  return cfg;
}

}  // namespace

TEST(NelderMead, ConvexQuadratic) {
  auto f = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += (v - 3.0) * (v - 3.0);
    return s;
  };
  const auto r = nelder_mead(f, {0.0, 0.0, 0.0, 0.0});
  EXPECT_TRUE(r.converged);
  for (double v : r.argmin) EXPECT_NEAR(v, 3.0, 1e-6);
}

TEST(NelderMead, Rosenbrock) {
  auto f = [](std::span<const double> x) {
    return 100.0 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1.0 - x[0]) * (1.0 - x[0]);
  };
  const auto r = nelder_mead(f, {-1.2, 1.0});
  EXPECT_NEAR(r.argmin[0], 1.0, 1e-4);
  EXPECT_NEAR(r.argmin[1], 1.0, 1e-4);
}

TEST(NelderMead, PiecewiseLinear) {
  const auto r = nelder_mead([](std::span<const double> x) { return std::fabs(x[0] - 5.0); }, {0.0});
  EXPECT_NEAR(r.argmin[0], 5.0, 1e-8);
}

TEST(NelderMead, RejectsNonFiniteStart) {
  auto f = [](std::span<const double> x) { return x[0] < 0.0 ? INFINITY : x[0]; };
  EXPECT_THROW(nelder_mead(f, {-1.0}), NonFiniteObjective);
}

TEST(NelderMead, MaxEvalsStops) {
  NelderMeadOptions opt;
  opt.max_evals = 50;
  auto f = [](std::span<const double> x) {
    return 100.0 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1.0 - x[0]) * (1.0 - x[0]);
  };
  const auto r = nelder_mead(f, {-1.2, 1.0}, opt);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.stop, NelderMeadStop::kMaxEvals);
  EXPECT_LE(r.evals, 50 + 3);
}

TEST(ParamTransform, RoundTrip) {
  const ParamTransform t(ModelSpec::parse("3LN"));
  const std::vector<double> p{1.0, 0.5, 4.0, 0.8, 9.0, 1.3, 0.2, 0.5};
  const auto back = t.to_natural(t.to_unconstrained(p));
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(back[i], p[i], 1e-12);
  const ParamTransform g(ModelSpec::parse("GB2"));
  const std::vector<double> q{2.0, 300.0, 0.7, 1.9};
  const auto gb = g.to_natural(g.to_unconstrained(q));
  for (std::size_t i = 0; i < q.size(); ++i) EXPECT_NEAR(gb[i] / q[i], 1.0, 1e-12);
}

TEST(FitMle, LognormalMatchesClosedForm) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto x = sample(LogNormal(7.0, 1.8), 5000, {seed, 0});
    const auto fit = fit_mle(ModelSpec::parse("LN"), x, std::nullopt, quick());
    const auto m = log_moments(x);
    EXPECT_NEAR(fit.params[0], m.mean, 1e-6);
    EXPECT_NEAR(fit.params[1], m.sd, 1e-6);
    EXPECT_TRUE(fit.converged);
  }
}

TEST(FitMle, LognormalRecoveryAndStandardErrors) {
  const std::size_t n = 50000;
  const auto x = sample(LogNormal(7.0, 1.8), n, {42, 0});
  const auto fit = fit_mle(ModelSpec::parse("LN"), x, std::nullopt, quick());
  EXPECT_LE(std::fabs(fit.params[0] - 7.0), 3.0 * fit.std_errors[0]);
  EXPECT_LE(std::fabs(fit.params[1] - 1.8), 3.0 * fit.std_errors[1]);
  const double s = fit.params[1];
  EXPECT_NEAR(fit.std_errors[0] / (s / std::sqrt(n)), 1.0, 0.02);
  EXPECT_NEAR(fit.std_errors[1] / (s / std::sqrt(2.0 * n)), 1.0, 0.02);
  EXPECT_FALSE(fit.singular_information);
}

TEST(FitMle, TwoComponentRecovery) {
  const std::vector<double> truth{5.0, 0.6, 9.0, 0.8, 0.4};
  const auto spec = ModelSpec::parse("2LN");
  const auto x = sample(spec, truth, 50000, {7, 0});
  const auto fit = fit_mle(spec, x, std::nullopt, quick());
  ASSERT_EQ(fit.params.size(), truth.size());
  EXPECT_LT(fit.params[0], fit.params[2]);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    EXPECT_LE(std::fabs(fit.params[i] - truth[i]), 4.0 * fit.std_errors[i]) << i;
  }
}

TEST(FitMle, DeterministicGivenSeed) {
  const auto x = sample(ModelSpec::parse("2LL"), std::vector<double>{3.0, 0.4, 6.0, 0.5, 0.5}, 3000, {3, 0});
  const auto a = fit_mle(ModelSpec::parse("2LL"), x, std::nullopt, quick());
  const auto b = fit_mle(ModelSpec::parse("2LL"), x, std::nullopt, quick());
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.loglik, b.loglik);
  EXPECT_EQ(a.std_errors, b.std_errors);
}

TEST(FitMle, PerturbationGridFindsNothingBetter) {
  const auto spec = ModelSpec::parse("2LN");
  const auto x = sample(spec, std::vector<double>{2.0, 0.5, 4.0, 0.7, 0.6}, 4000, {11, 0});
  const auto fit = fit_mle(spec, x, std::nullopt, quick());
  const FitObjective obj(spec, x);
  const auto u = obj.transform().to_unconstrained(fit.params);
  const auto se = standard_errors(spec, fit.params, x).unconstrained;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (int j = -4; j <= 4; ++j) {
      auto v = u;
      v[i] += 8.0 * se[i] * j / 4.0;
      EXPECT_LE(static_cast<double>(obj.log_likelihood_u(v)), fit.loglik + 1e-8 * std::fabs(fit.loglik));
    }
  }
}

TEST(FitMle, NestedLoglikNeverDecreases) {
  const auto x = sample(ModelSpec::parse("3LN"), std::vector<double>{2.0, 0.5, 4.0, 0.6, 7.0, 0.9, 0.3, 0.3},
                        3000, {5, 0});
  std::map<std::string, FittedModel> fits;
  double prev = -INFINITY;
  for (const char* name : {"LN", "2LN", "3LN", "4LN"}) {
    const auto spec = ModelSpec::parse(name);
    const auto warm = warm_starts_from(fits, spec);
    const auto fit = fit_mle(spec, x, std::nullopt, quick(2), warm);
    EXPECT_GE(fit.loglik, prev - 1e-6) << name;
    prev = fit.loglik;
    fits.emplace(name, fit);
  }
  fits.clear();
  prev = -INFINITY;
  for (const char* name : {"2LSt12", "3LSt", "4LSt"}) {
    const auto spec = ModelSpec::parse(name);
    const auto fit = fit_mle(spec, x, std::nullopt, quick(2), warm_starts_from(fits, spec));
    EXPECT_GE(fit.loglik, prev - 1e-6) << name;
    prev = fit.loglik;
    fits.emplace(name, fit);
  }
}

TEST(FitMle, WarmStartSplitPreservesDensity) {
  FittedModel f;
  f.spec = ModelSpec::parse("2LN");
  f.params = {2.0, 0.5, 5.0, 0.9, 0.3};
  const auto w = nested_warm_start(f, ModelSpec::parse("3LN"));
  ASSERT_TRUE(w.has_value());
  const Model a = Model::from_params(f.spec, f.params);
  const Model b = Model::from_params(ModelSpec::parse("3LN"), *w);
  for (double y : {0.0, 2.0, 3.3, 5.0, 8.0}) EXPECT_NEAR(b.pdf_y(y), a.pdf_y(y), 1e-12);
  EXPECT_FALSE(nested_warm_start(f, ModelSpec::parse("2LL")).has_value());
  f.spec = ModelSpec::parse("LN");
  f.params = {3.0, 1.0};
  const auto snp = nested_warm_start(f, ModelSpec::parse("LNSNP"));
  ASSERT_TRUE(snp.has_value());
  EXPECT_EQ(*snp, (std::vector<double>{3.0, 1.0, 0.0, 0.0, 0.0, 0.0}));
}

TEST(FitMle, InputValidation) {
  const auto x = sample(LogNormal(1.0, 1.0), 30, {1, 0});
  EXPECT_THROW(fit_mle(ModelSpec::parse("2LN"), x), std::invalid_argument);
  const auto y = sample(LogNormal(1.0, 1.0), 200, {1, 0});
  EXPECT_THROW(fit_mle(ModelSpec::parse("LNtt"), y), std::invalid_argument);
  EXPECT_THROW(fit_mle(ModelSpec::parse("LNtt"), y, TruncationWindow(10.0, 20.0)), std::invalid_argument);
}

TEST(FitMle, TruncatedFitRecoversParameters) {
  const auto spec = ModelSpec::parse("LNtt");
  const TruncationWindow w(std::exp(3.0), std::exp(8.0));
  const auto x = sample_truncated(spec, std::vector<double>{5.0, 1.5}, w, 20000, {4, 0});
  const auto fit = fit_mle(spec, x, w, quick());
  EXPECT_LE(std::fabs(fit.params[0] - 5.0), 4.0 * fit.std_errors[0]);
  EXPECT_LE(std::fabs(fit.params[1] - 1.5), 4.0 * fit.std_errors[1]);
  EXPECT_TRUE(fit.window.has_value());
}

TEST(FitMle, MonteCarloStandardErrorsMatchSpread) {
  const auto spec = ModelSpec::parse("2LN");
  const std::vector<double> truth{5.0, 0.6, 9.0, 0.8, 0.4};
  std::vector<double> mu1, se1;
  for (std::uint64_t r = 0; r < 200; ++r) {
    const auto x = sample(spec, truth, 2000, {900 + r, 0});
    FitConfig cfg = quick(1);
    const std::vector<std::vector<double>> warm{truth};
    const auto fit = fit_mle(spec, x, std::nullopt, cfg, warm);
    mu1.push_back(fit.params[0]);
    se1.push_back(fit.std_errors[0]);
  }
  const double mean = std::accumulate(mu1.begin(), mu1.end(), 0.0) / mu1.size();
  double ss = 0.0;
  for (double v : mu1) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (mu1.size() - 1));
  const double mean_se = std::accumulate(se1.begin(), se1.end(), 0.0) / se1.size();
  EXPECT_NEAR(mean_se / sd, 1.0, 0.30);
}
