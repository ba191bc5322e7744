#include "compdist/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace compdist {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double location_of(const BaseDistribution& d) { return params_of(d).at(0); }
double scale_of(const BaseDistribution& d) { return params_of(d).at(1); }

}  // namespace

Mixture::Mixture(std::vector<BaseDistribution> components, std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty()) throw std::invalid_argument("mixture needs at least one component");
  if (weights_.size() != components_.size()) {
    throw std::invalid_argument("mixture weight count must equal component count");
  }
  const BaseFamily fam = family_of(components_.front());
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (family_of(components_[i]) != fam) {
      throw std::invalid_argument("mixture components must share one base family");
    }
    if (!(weights_[i] >= 0.0 && weights_[i] <= 1.0)) {
      throw std::domain_error("mixture weights must lie in [0, 1]");
    }
    total += weights_[i];
  }
  if (std::fabs(total - 1.0) > 1e-9) throw std::domain_error("mixture weights must sum to 1");
}

Mixture Mixture::single(BaseDistribution component) {
  return Mixture({std::move(component)}, {1.0});
}

Mixture Mixture::from_free_weights(std::vector<BaseDistribution> components,
                                   std::span<const double> free_weights) {
  if (free_weights.size() + 1 != components.size()) {
    throw std::invalid_argument("expected ell - 1 free weights");
  }
  std::vector<double> w(free_weights.begin(), free_weights.end());
  double rest = 1.0;
  for (double p : free_weights) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("mixture weights must lie in [0, 1]");
    rest -= p;
  }
  if (rest < -1e-12 || rest > 1.0) throw std::domain_error("1 - sum(p) must lie in [0, 1]");
  w.push_back(std::max(rest, 0.0));
  return Mixture(std::move(components), std::move(w));
}

std::vector<double> Mixture::free_weights() const {
  return std::vector<double>(weights_.begin(), weights_.end() - 1);
}

double Mixture::pdf_y(double y) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (weights_[i] > 0.0) sum += weights_[i] * compdist::pdf_y(components_[i], y);
  }
  return sum;
}

double Mixture::log_pdf_y(double y) const {
  if (components_.size() == 1) return compdist::log_pdf_y(components_.front(), y);
  double terms[16];
  std::vector<double> big;
  double* t = terms;
  if (components_.size() > 16) {
    big.resize(components_.size());
    t = big.data();
  }
  double mx = kNegInf;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    t[i] = weights_[i] > 0.0 ? std::log(weights_[i]) + compdist::log_pdf_y(components_[i], y)
                             : kNegInf;
    mx = std::max(mx, t[i]);
  }
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) s += std::exp(t[i] - mx);
  return mx + std::log(s);
}

double Mixture::cdf_y(double y) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (weights_[i] > 0.0) sum += weights_[i] * compdist::cdf_y(components_[i], y);
  }
  return sum;
}

double Mixture::pdf(double x) const {
  const double y = detail::checked_log(x);
  return pdf_y(y) / x;
}

double Mixture::log_pdf(double x) const {
  const double y = detail::checked_log(x);
  return log_pdf_y(y) - y;
}

double Mixture::cdf(double x) const { return cdf_y(detail::checked_log(x)); }

void Mixture::log_pdf_y(std::span<const double> y, std::span<double> out) const {
  const std::size_t n = y.size();
  const std::size_t ell = components_.size();
  if (ell == 1) {
    compdist::log_pdf_y(components_.front(), y, out);
    return;
  }
  thread_local std::vector<double> scratch;
  scratch.resize(n * ell);
  for (std::size_t c = 0; c < ell; ++c) {
    std::span<double> row(scratch.data() + c * n, n);
    if (weights_[c] > 0.0) {
      compdist::log_pdf_y(components_[c], y, row);
      const double lw = std::log(weights_[c]);
      for (double& v : row) v += lw;
    } else {
      std::fill(row.begin(), row.end(), kNegInf);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double mx = kNegInf;
    for (std::size_t c = 0; c < ell; ++c) mx = std::max(mx, scratch[c * n + i]);
    if (mx == kNegInf || std::isnan(mx)) {
      out[i] = mx;
      continue;
    }
    double s = 0.0;
    for (std::size_t c = 0; c < ell; ++c) s += std::exp(scratch[c * n + i] - mx);
    out[i] = mx + std::log(s);
  }
}

std::vector<std::size_t> canonical_order(const Mixture& mixture) {
  std::vector<std::size_t> order(mixture.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const BaseFamily fam = mixture.family();
  if (fam != BaseFamily::kLogNormal && fam != BaseFamily::kLogLogistic) return order;
  const auto& comps = mixture.components();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = location_of(comps[a]);
    const double mb = location_of(comps[b]);
    if (ma != mb) return ma < mb;
    return scale_of(comps[a]) < scale_of(comps[b]);
  });
  return order;
}

Mixture canonicalize(const Mixture& mixture) {
  const auto order = canonical_order(mixture);
  std::vector<BaseDistribution> comps;
  std::vector<double> weights;
  comps.reserve(order.size());
  weights.reserve(order.size());
  for (std::size_t i : order) {
    comps.push_back(mixture.components()[i]);
    weights.push_back(mixture.weights()[i]);
  }
  return Mixture(std::move(comps), std::move(weights));
}

}  // namespace compdist
