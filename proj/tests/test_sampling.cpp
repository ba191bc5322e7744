#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "compdist/errors.hpp"
#include "compdist/gof.hpp"
#include "compdist/model.hpp"
#include "compdist/sampling.hpp"
#include "oracles.hpp"

using namespace compdist;

namespace {

// 1% critical value of the one-sample KS statistic.
double ks_crit(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

double ks_against(const std::vector<double>& x, const Model& m) { return gof_report(x, m).ks; }

}  // namespace

TEST(Sampling, LognormalMeanWithinClt) {
  const std::size_t n = 1000000;
  const auto x = sample(LogNormal(0.0, 1.0), n, {1, 0});
  double s = 0.0;
  for (double v : x) s += std::log(v);
  EXPECT_LT(std::fabs(s / n), 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Sampling, DegenerateWeightMatchesComponent) {
  const LogNormal a(2.0, 0.5), b(7.0, 1.0);
  const auto mix = sample(Mixture({a, b}, {1.0, 0.0}), 5000, {2, 0});
  const auto single = sample(a, 5000, {2, 1});
  EXPECT_GT(two_sample_tests(mix, single, 499, 3).p_ks, 0.01);
}

TEST(Sampling, DplnPassesKs) {
  const std::size_t n = 100000;
  const Model m = Model::from_params(ModelSpec::parse("DPLN"), std::vector<double>{2.0, 1.0, 0.0, 0.5});
  EXPECT_LT(ks_against(sample(m, n, {3, 0}), m), ks_crit(n));
}

TEST(Sampling, EveryModelPassesKs) {
  const std::size_t n = 100000;
  std::mt19937_64 rng(21);
  std::uint64_t stream = 0;
  for (const auto& spec : parse_model_list("all")) {
    const Model m = Model::from_params(spec, oracle::random_params(spec, rng));
    EXPECT_LT(ks_against(sample(m, n, {4, ++stream}), m), ks_crit(n)) << spec.name();
  }
}

TEST(Sampling, DeterministicStreams) {
  const auto spec = ModelSpec::parse("3LSt");
  const std::vector<double> p{2.0, 0.5, 5.0, 0.7, 8.0, 1.0, 0.3, 0.3};
  EXPECT_EQ(sample(spec, p, 1000, {9, 4}), sample(spec, p, 1000, {9, 4}));
  EXPECT_NE(sample(spec, p, 1000, {9, 4}), sample(spec, p, 1000, {9, 5}));
  const RngStream s{9, 4};
  EXPECT_NE(s.substream(1).stream_id, s.substream(2).stream_id);
}

TEST(Sampling, InfeasibleLnsnpRejected) {
  const BaseDistribution d = LogSemiNonparametric(2.0, 0.9, {0.1, -0.2, 0.05, 0.5});
  EXPECT_THROW(sample(d, 10, {1, 0}), std::invalid_argument);
}

TEST(SamplingTruncated, DrawsStayInWindow) {
  const auto spec = ModelSpec::parse("2LNtt");
  const std::vector<double> p{2.0, 0.6, 6.0, 1.2, 0.3};
  for (auto [a, b] : {std::pair{3.0, 2000.0}, std::pair{1e3, 1.1e3}, std::pair{5.0, 6.0}}) {
    const TruncationWindow w(a, b);
    const auto x = sample_truncated(spec, p, w, 20000, {5, 0});
    EXPECT_GE(*std::min_element(x.begin(), x.end()), a);
    EXPECT_LE(*std::max_element(x.begin(), x.end()), b);
    const Model m = Model::from_params(spec, p, w);
    EXPECT_LT(ks_against(x, m), ks_crit(x.size())) << a << "," << b;
  }
}

TEST(SamplingTruncated, TwoComponentAgainstAnalyticCdf) {
  const std::size_t n = 100000;
  const auto spec = ModelSpec::parse("2LNtt");
  const std::vector<double> p{3.0, 0.8, 7.0, 1.0, 0.45};
  const TruncationWindow w(std::exp(2.5), std::exp(8.5));
  const Model m = Model::from_params(spec, p, w);
  EXPECT_LT(ks_against(sample_truncated(spec, p, w, n, {6, 0}), m), ks_crit(n));
}

TEST(SamplingTruncated, IdentityWindowMatchesUntruncated) {
  const auto spec = ModelSpec::parse("2LL");
  const std::vector<double> p{3.0, 0.4, 6.0, 0.6, 0.5};
  const auto full = sample(spec, p, 5000, {7, 0});
  const auto ident = sample_truncated(spec, p, TruncationWindow::identity(), 5000, {7, 1});
  EXPECT_GT(two_sample_tests(full, ident, 499, 1).p_ks, 0.01);
}

TEST(SamplingTruncated, MassTooSmallPropagates) {
  const BaseDistribution d = LogNormal(0.0, 0.1);
  const Mixture m = Mixture::single(d);
  EXPECT_THROW(sample_truncated(m, TruncationWindow(1e100, 1e101), 10, {1, 0}), MassTooSmall);
}
