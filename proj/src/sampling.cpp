#include "compdist/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "compdist/errors.hpp"

namespace compdist {

namespace {

constexpr double kEnvelopeScale = 1.5;
constexpr long kMaxRejections = 100000;

// Bound of phi(z) P(z) / (phi(z / s) / s) on the feasibility grid, with a
// margin for the gaps between grid points.
double lnsnp_envelope(const LogSemiNonparametric& d) {
  const double c = 0.5 * (1.0 - 1.0 / (kEnvelopeScale * kEnvelopeScale));
  double best = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double z = -10.0 + 0.01 * i;
    best = std::max(best, kEnvelopeScale * d.polynomial(z) * std::exp(-c * z * z));
  }
  return 1.05 * best;
}

double draw_lnsnp(const LogSemiNonparametric& d, std::mt19937_64& rng) {
  if (!d.is_feasible()) throw std::invalid_argument("LNSNP coefficients give a negative density");
  const double m = lnsnp_envelope(d);
  if (m > 1e4) throw RejectionBudget("LNSNP envelope constant too large");
  const double c = 0.5 * (1.0 - 1.0 / (kEnvelopeScale * kEnvelopeScale));
  std::normal_distribution<double> normal(0.0, kEnvelopeScale);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (long i = 0; i < kMaxRejections; ++i) {
    const double z = normal(rng);
    const double ratio = kEnvelopeScale * d.polynomial(z) * std::exp(-c * z * z);
    if (unif(rng) * m < ratio) return d.mu() + d.sigma() * z;
  }
  throw RejectionBudget("LNSNP rejection sampler exceeded its budget");
}

struct YDrawer {
  std::mt19937_64& rng;

  double operator()(const LogNormal& d) const {
    return d.mu() + d.sigma() * std::normal_distribution<double>(0.0, 1.0)(rng);
  }
  double operator()(const DoubleParetoLogNormal& d) const {
    std::exponential_distribution<double> expo(1.0);
    const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
    const double e1 = expo(rng);
    const double e2 = expo(rng);
    return d.mu() + d.sigma() * z + e1 / d.alpha() - e2 / d.beta();
  }
  double operator()(const GeneralizedBeta2& d) const {
    const double g1 = std::gamma_distribution<double>(d.p(), 1.0)(rng);
    const double g2 = std::gamma_distribution<double>(d.q(), 1.0)(rng);
    return std::log(d.b()) + (std::log(g1) - std::log(g2)) / d.a();
  }
  double operator()(const LogSemiNonparametric& d) const { return draw_lnsnp(d, rng); }
  double operator()(const LogLogistic& d) const {
    double u;
    do {
      u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    } while (u == 0.0);
    return d.mu() + d.sigma() * (std::log(u) - std::log1p(-u));
  }
  double operator()(const LogStudent& d) const {
    return d.mu() + d.sigma() * std::student_t_distribution<double>(d.nu())(rng);
  }
};

std::size_t draw_component(const std::vector<double>& cumulative, std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
}

std::vector<double> cumulative_weights(const Mixture& m) {
  std::vector<double> c(m.weights().size());
  std::partial_sum(m.weights().begin(), m.weights().end(), c.begin());
  return c;
}

std::vector<double> to_x(std::vector<double> y) {
  for (double& v : y) v = std::exp(v);
  return y;
}

}  // namespace

double draw_y(const BaseDistribution& d, std::mt19937_64& rng) {
  return std::visit(YDrawer{rng}, d);
}

double draw_truncated_y(const BaseDistribution& d, const TruncationWindow& window,
                        std::mt19937_64& rng) {
  const double mass = window_mass(d, window);
  if (mass >= 0.25) {
    for (long i = 0; i < kMaxRejections; ++i) {
      const double y = draw_y(d, rng);
      if (window.contains_y(y)) return y;
    }
    throw RejectionBudget("truncated rejection sampler exceeded its budget");
  }
  // Upper-tail windows of symmetric families are inverted on the mirrored
  // lower tail, where the cdf keeps full relative precision.
  const bool mirror = reflect_window(d, window);
  const double c2 = mirror ? 2.0 * params_of(d)[0] : 0.0;
  const double a = mirror ? c2 - window.y_max() : window.y_min();
  const double b = mirror ? c2 - window.y_min() : window.y_max();
  const double lo = cdf_y(d, a);
  const double hi = cdf_y(d, b);
  const double u = lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double y = (u > 0.0 && u < 1.0) ? quantile_y(d, u) : (u <= 0.0 ? a : b);
  y = std::clamp(y, a, b);
  return mirror ? std::clamp(c2 - y, window.y_min(), window.y_max()) : y;
}

std::vector<double> sample_y(const Mixture& mixture, std::size_t n, const RngStream& stream) {
  auto rng = stream.engine();
  const auto cum = cumulative_weights(mixture);
  std::vector<double> out(n);
  for (auto& y : out) y = draw_y(mixture.components()[draw_component(cum, rng)], rng);
  return out;
}

std::vector<double> sample_truncated_y(const Mixture& mixture, const TruncationWindow& window,
                                       std::size_t n, const RngStream& stream) {
  for (const auto& c : mixture.components()) window_mass(c, window);
  auto rng = stream.engine();
  const auto cum = cumulative_weights(mixture);
  std::vector<double> out(n);
  for (auto& y : out) {
    y = draw_truncated_y(mixture.components()[draw_component(cum, rng)], window, rng);
  }
  return out;
}

std::vector<double> sample(const BaseDistribution& d, std::size_t n, const RngStream& stream) {
  return sample(Mixture::single(d), n, stream);
}

std::vector<double> sample(const Mixture& mixture, std::size_t n, const RngStream& stream) {
  return to_x(sample_y(mixture, n, stream));
}

std::vector<double> sample_truncated(const Mixture& mixture, const TruncationWindow& window,
                                     std::size_t n, const RngStream& stream) {
  auto x = to_x(sample_truncated_y(mixture, window, n, stream));
  // exp(y_min) may differ from a by an ulp.
  for (double& v : x) v = std::clamp(v, window.a(), window.b());
  return x;
}

std::vector<double> sample(const Model& model, std::size_t n, const RngStream& stream) {
  if (model.window()) return sample_truncated(model.mixture(), *model.window(), n, stream);
  return sample(model.mixture(), n, stream);
}

std::vector<double> sample(const ModelSpec& spec, std::span<const double> params, std::size_t n,
                           const RngStream& stream) {
  ModelSpec untruncated = spec;
  untruncated.truncated = false;
  return sample(Model::from_params(untruncated, params), n, stream);
}

std::vector<double> sample_truncated(const ModelSpec& spec, std::span<const double> params,
                                     const TruncationWindow& window, std::size_t n,
                                     const RngStream& stream) {
  ModelSpec untruncated = spec;
  untruncated.truncated = false;
  return sample_truncated(Model::from_params(untruncated, params).mixture(), window, n, stream);
}

}  // namespace compdist
