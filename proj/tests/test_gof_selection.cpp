#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "compdist/gof.hpp"
#include "compdist/model.hpp"
#include "compdist/sampling.hpp"
#include "compdist/selection.hpp"
#include "oracles.hpp"

using namespace compdist;

namespace {

std::vector<double> plotting_positions(std::size_t n) {
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = (i + 0.5) / n;
  return u;
}

TwoSampleStats brute_force_two_sample(std::span<const double> a, std::span<const double> b) {
  const double n = a.size(), m = b.size(), N = n + m;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  TwoSampleStats s;
  auto ecdf = [](std::span<const double> v, double z) {
    return static_cast<double>(std::count_if(v.begin(), v.end(), [&](double t) { return t <= z; })) / v.size();
  };
  for (double z : pooled) {
    const double fa = ecdf(a, z), fb = ecdf(b, z);
    const double h = (n * fa + m * fb) / N;
    s.ks = std::max(s.ks, std::fabs(fa - fb));
    s.cm += (fa - fb) * (fa - fb);
    if (h < 1.0) s.ad += (fa - fb) * (fa - fb) / (h * (1.0 - h));
  }
  s.cm *= n * m / (N * N);
  s.ad *= n * m / (N * N);
  return s;
}

}  // namespace

TEST(Gof, PlottingPositionIdentities) {
  for (std::size_t n : {1u, 2u, 7u, 100u}) {
    const auto u = plotting_positions(n);
    // u_i = (i - 1/2)/n is itself rounded, so agreement is to rounding.
    EXPECT_NEAR(ks_stat(u), 0.5 / n, 1e-15);
    EXPECT_EQ(cm_stat(u), 1.0 / (12.0 * n));
  }
  EXPECT_NEAR(ks_stat(std::vector<double>{0.3}), 0.7, 1e-15);
  EXPECT_NEAR(cm_stat(std::vector<double>{0.5}), 1.0 / 12.0, 1e-15);
}

TEST(Gof, AndersonDarlingHandValue) {
  // n = 2, u = (1/4, 3/4): AD = -2 - [ (1/2)(ln 1/4 + ln 1/4) + (3/2)(ln 3/4 + ln 3/4) ].
  const std::vector<double> u{0.25, 0.75};
  const double expected = -2.0 - (0.5 * 2.0 * std::log(0.25) + 1.5 * 2.0 * std::log(0.75));
  EXPECT_NEAR(ad_stat(u).value, expected, 1e-15);
  EXPECT_FALSE(ad_stat(u).clamped);
  EXPECT_TRUE(ad_stat(std::vector<double>{0.0, 0.5}).clamped);
  EXPECT_TRUE(std::isfinite(ad_stat(std::vector<double>{0.5, 1.0}).value));
}

TEST(Gof, StatisticsMatchIntegralOracles) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto u = oracle::sorted_uniforms(100, seed);
    EXPECT_NEAR(cm_stat(u), oracle::weighted_integral(u, [](double) { return 1.0; }), 1e-10);
    EXPECT_NEAR(ad_stat(u).value, oracle::weighted_integral(u, [](double s) { return 1.0 / (s * (1.0 - s)); }), 1e-10);
  }
}

TEST(Gof, KsMatchesBruteForceAgainstLognormal) {
  const Model m = Model::from_params(ModelSpec::parse("LN"), std::vector<double>{2.0, 0.8});
  auto x = sample(m, 100, {3, 0});
  std::sort(x.begin(), x.end());
  const auto cdf = [&](double v) { return m.cdf(v); };
  EXPECT_NEAR(gof_report(x, cdf).ks, oracle::brute_force_ks(x, cdf), 1e-15);
  // Invariance under the joint monotone map x -> ln x.
  std::vector<double> y(x.size());
  std::transform(x.begin(), x.end(), y.begin(), [](double v) { return std::log(v); });
  const auto gy = gof_report(y, [&](double v) { return m.cdf_y(v); });
  const auto gx = gof_report(x, m);
  EXPECT_NEAR(gy.ks, gx.ks, 1e-12);
  EXPECT_NEAR(gy.cm, gx.cm, 1e-12);
  EXPECT_NEAR(gy.ad, gx.ad, 1e-12);
}

TEST(Gof, DuplicatedSampleScaling) {
  const auto u = oracle::sorted_uniforms(60, 9);
  std::vector<double> twice;
  for (double v : u) twice.insert(twice.end(), {v, v});
  EXPECT_EQ(ks_stat(twice), ks_stat(u));
  // F_n is unchanged and n doubles, so both quadratic statistics double.
  EXPECT_NEAR(cm_stat(twice), 2.0 * cm_stat(u), 1e-12);
  EXPECT_NEAR(ad_stat(twice).value, 2.0 * ad_stat(u).value, 1e-11);
}

TEST(Gof, AndersonDarlingNearAsymptoticMean) {
  const Model m = Model::from_params(ModelSpec::parse("2LN"), std::vector<double>{2.0, 0.5, 5.0, 1.0, 0.3});
  const auto x = sample(m, 100000, {77, 0});
  const auto r = gof_report(x, m);
  EXPECT_GT(r.ad, 0.2);
  EXPECT_LT(r.ad, 5.0);
  EXPECT_EQ(r.n, 100000u);
}

TEST(TwoSample, StatisticsMatchBruteForce) {
  std::mt19937_64 rng(5);
  std::vector<double> a(37), b(53);
  for (auto& v : a) v = std::round(oracle::uniform(rng, 0.0, 20.0));  // ties
  for (auto& v : b) v = std::round(oracle::uniform(rng, 2.0, 25.0));
  const auto s = two_sample_stats(a, b);
  const auto o = brute_force_two_sample(a, b);
  EXPECT_NEAR(s.ks, o.ks, 1e-15);
  EXPECT_NEAR(s.cm, o.cm, 1e-12);
  EXPECT_NEAR(s.ad, o.ad, 1e-12);
}

TEST(TwoSample, IdenticalAndDisjointSamples) {
  const std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const auto same = two_sample_tests(a, a, 199, 1);
  EXPECT_EQ(same.stats.ks, 0.0);
  EXPECT_EQ(same.stats.cm, 0.0);
  EXPECT_EQ(same.stats.ad, 0.0);
  EXPECT_EQ(same.p_ks, 1.0);
  std::vector<double> lo(20), hi(20);
  for (int i = 0; i < 20; ++i) {
    lo[i] = 1.0 + i;
    hi[i] = 100.0 + i;
  }
  const auto apart = two_sample_tests(lo, hi, 999, 1);
  EXPECT_EQ(apart.stats.ks, 1.0);
  EXPECT_NEAR(apart.p_ks, 1.0 / 1000.0, 1e-15);
  EXPECT_EQ(apart.n_perm, 999);
}

TEST(TwoSample, NominalRejectionRate) {
  const Model m = Model::from_params(ModelSpec::parse("LN"), std::vector<double>{3.0, 1.0});
  int reject = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    const auto a = sample(m, 5000, {1000u + r, 1});
    const auto b = sample(m, 5000, {1000u + r, 2});
    reject += two_sample_tests(a, b, 199, r).p_ks <= 0.05;
  }
  const double rate = static_cast<double>(reject) / reps;
  EXPECT_GE(rate, 0.02);
  EXPECT_LE(rate, 0.09);
}

TEST(Selection, InformationCriteria) {
  EXPECT_EQ(aic(-100.0, 2), 204.0);
  EXPECT_NEAR(bic(-100.0, 2, std::exp(2.0)), 204.0, 1e-12);
  EXPECT_NEAR(hqc(0.0, 14, 1e5), 2.0 * 14.0 * std::log(std::log(1e5)), 1e-12);
  EXPECT_THROW(hqc(0.0, 2, 2.0), std::domain_error);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const double ll = oracle::uniform(rng, -1e6, 0.0);
    const int k = 2 + static_cast<int>(oracle::uniform(rng, 0.0, 13.0));
    const double n = std::floor(oracle::uniform(rng, 16.0, 1e5));
    EXPECT_NEAR(bic(ll, k, n) - aic(ll, k), k * (std::log(n) - 2.0), 1e-6);
    EXPECT_LE(aic(ll, k), hqc(ll, k, n));
    EXPECT_LE(hqc(ll, k, n), bic(ll, k, n));
  }
}

TEST(Selection, FlagsAndCounts) {
  SelectionTable t{"s1", {}};
  for (const char* name : {"LN", "2LN", "3LN", "DPLN"}) {
    const auto spec = ModelSpec::parse(name);
    const double ll = std::string(name) == "3LN" ? -900.0 : -1000.0;
    const double g = std::string(name) == "3LN" ? 0.01 : 0.05;
    t.rows.push_back(make_row(spec, ll, 500, g, g, g));
  }
  t.rows.push_back(blank_row(ModelSpec::parse("GB2"), "not estimable"));
  assign_flags(t);
  for (const auto& r : t.rows) {
    for (bool f : r.flags) EXPECT_EQ(f, r.spec.name() == "3LN");
  }
  const auto counts = summarize_counts(std::span<const SelectionTable>(&t, 1));
  EXPECT_EQ(counts.n_tables, 1);
  for (int c : counts.total) EXPECT_EQ(c, 1);
  EXPECT_EQ(counts.models[2], "3LN");
  for (int c : counts.counts[2]) EXPECT_EQ(c, 1);
  EXPECT_EQ(counts.k[4], 4);

  // A constant shift of all logliks leaves every flag unchanged.
  SelectionTable shifted = t;
  for (auto& r : shifted.rows) {
    if (r.estimable) r = make_row(r.spec, r.loglik + 12345.0, r.n, r.ks, r.cm, r.ad);
  }
  assign_flags(shifted);
  for (std::size_t i = 0; i < t.rows.size(); ++i) EXPECT_EQ(shifted.rows[i].flags, t.rows[i].flags);
}

TEST(Selection, TiesGoToSmallerKThenName) {
  SelectionTable t{"tie", {}};
  t.rows.push_back(make_row(ModelSpec::parse("DPLN"), -10.0, 100, 0.1, 0.1, 0.1));
  t.rows.push_back(make_row(ModelSpec::parse("GB2"), -10.0, 100, 0.1, 0.1, 0.1));
  t.rows.push_back(make_row(ModelSpec::parse("2LN"), -8.0, 100, 0.1, 0.1, 0.1));
  assign_flags(t);
  // GoF columns tie across all three: smaller k wins (DPLN/GB2 have 4), then name.
  EXPECT_TRUE(t.rows[0].flags[0]);
  EXPECT_FALSE(t.rows[1].flags[0]);
  EXPECT_FALSE(t.rows[2].flags[0]);
}

TEST(Selection, CountColumnsSumToTables) {
  std::vector<SelectionTable> tables;
  std::mt19937_64 rng(1);
  for (int s = 0; s < 7; ++s) {
    SelectionTable t{"s" + std::to_string(s), {}};
    for (const auto& spec : parse_model_list("all")) {
      t.rows.push_back(make_row(spec, oracle::uniform(rng, -1100.0, -1000.0), 1000, oracle::uniform(rng, 0, 1),
                                oracle::uniform(rng, 0, 1), oracle::uniform(rng, 0, 1)));
    }
    assign_flags(t);
    tables.push_back(t);
  }
  const auto counts = summarize_counts(tables);
  EXPECT_EQ(counts.models.size(), 17u);
  for (std::size_t c = 0; c < kCriteria.size(); ++c) {
    int sum = 0;
    for (const auto& row : counts.counts) sum += row[c];
    EXPECT_EQ(sum, 7);
    EXPECT_EQ(counts.total[c], 7);
  }
}
