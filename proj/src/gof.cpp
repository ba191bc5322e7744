#include "compdist/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "compdist/model.hpp"
#include "compdist/rng.hpp"

namespace compdist {

double ks_stat(std::span<const double> u) {
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - u[i];
    const double below = u[i] - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

double cm_stat(std::span<const double> u) {
  const double n = static_cast<double>(u.size());
  long double sum = 0.0L;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n) - u[i];
    sum += static_cast<long double>(r) * r;
  }
  return static_cast<double>(1.0L / (12.0L * n) + sum);
}

AdStat ad_stat(std::span<const double> u) {
  constexpr double kLo = 1e-15;
  constexpr double kHi = 1.0 - 1e-15;
  const std::size_t n = u.size();
  AdStat out;
  auto clamp = [&](double v) {
    if (v < kLo || v > kHi) {
      out.clamped = true;
      return std::clamp(v, kLo, kHi);
    }
    return v;
  };
  long double sum = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = clamp(u[i]);
    const double hi = clamp(u[n - 1 - i]);
    sum += (2.0L * i + 1.0L) / n * (std::log(lo) + std::log1p(-hi));
  }
  out.value = static_cast<double>(-static_cast<long double>(n) - sum);
  return out;
}

std::vector<double> cdf_values(std::span<const double> sorted,
                               const std::function<double(double)>& cdf) {
  std::vector<double> u(sorted.size());
  std::transform(sorted.begin(), sorted.end(), u.begin(), cdf);
  return u;
}

GofReport gof_report(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  if (sorted.empty()) throw std::invalid_argument("gof_report: empty sample");
  const auto u = cdf_values(sorted, cdf);
  const auto ad = ad_stat(u);
  return {ks_stat(u), cm_stat(u), ad.value, u.size(), ad.clamped};
}

GofReport gof_report(std::span<const double> x, const Model& model) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  return gof_report(sorted, [&](double v) { return model.cdf(v); });
}

namespace {

// Pooled sample sorted once; a permutation only relabels its elements.
struct Pooled {
  std::vector<std::size_t> group_end;  // one past the last index of each tie group
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

TwoSampleStats stats_from_labels(const Pooled& pooled, const std::vector<char>& is_a) {
  const double na = static_cast<double>(pooled.n_a);
  const double nb = static_cast<double>(pooled.n_b);
  const double total = na + nb;
  std::size_t ca = 0;
  std::size_t start = 0;
  TwoSampleStats s;
  long double cm = 0.0L;
  long double ad = 0.0L;
  for (std::size_t end : pooled.group_end) {
    for (std::size_t i = start; i < end; ++i) ca += is_a[i];
    const double mult = static_cast<double>(end - start);
    const double fa = ca / na;
    const double fb = (end - ca) / nb;
    const double h = end / total;
    const double diff = fa - fb;
    s.ks = std::max(s.ks, std::fabs(diff));
    cm += mult * diff * diff;
    if (end < pooled.group_end.back()) ad += mult * diff * diff / (h * (1.0 - h));
    start = end;
  }
  const double scale = na * nb / (total * total);
  s.cm = static_cast<double>(scale * cm);
  s.ad = static_cast<double>(scale * ad);
  return s;
}

}  // namespace

TwoSampleStats two_sample_stats(std::span<const double> a, std::span<const double> b) {
  return two_sample_tests(a, b, 0).stats;
}

TwoSampleResult two_sample_tests(std::span<const double> a, std::span<const double> b,
                                 int n_perm, std::uint64_t seed) {
  if (a.empty() || b.empty()) throw std::invalid_argument("two_sample_tests: empty sample");
  std::vector<std::pair<double, char>> all;
  all.reserve(a.size() + b.size());
  for (double v : a) all.emplace_back(v, 1);
  for (double v : b) all.emplace_back(v, 0);
  std::sort(all.begin(), all.end());

  Pooled pooled;
  pooled.n_a = a.size();
  pooled.n_b = b.size();
  std::vector<char> labels(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    labels[i] = all[i].second;
    if (i + 1 == all.size() || all[i + 1].first != all[i].first) pooled.group_end.push_back(i + 1);
  }

  TwoSampleResult out;
  out.stats = stats_from_labels(pooled, labels);
  out.n_perm = std::max(n_perm, 0);
  if (out.n_perm == 0) return out;

  auto rng = RngStream{seed, 0}.engine();
  const auto slack = [](double v) { return v - 1e-12 * std::fabs(v); };
  int ge_ks = 0, ge_cm = 0, ge_ad = 0;
  for (int r = 0; r < out.n_perm; ++r) {
    std::shuffle(labels.begin(), labels.end(), rng);
    const auto s = stats_from_labels(pooled, labels);
    ge_ks += s.ks >= slack(out.stats.ks);
    ge_cm += s.cm >= slack(out.stats.cm);
    ge_ad += s.ad >= slack(out.stats.ad);
  }
  const double denom = out.n_perm + 1.0;
  out.p_ks = (1.0 + ge_ks) / denom;
  out.p_cm = (1.0 + ge_cm) / denom;
  out.p_ad = (1.0 + ge_ad) / denom;
  return out;
}

}  // namespace compdist
