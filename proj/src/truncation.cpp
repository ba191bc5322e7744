#include "compdist/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "compdist/errors.hpp"

namespace compdist {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMinMass = 1e-300;

bool is_symmetric_location_scale(const BaseDistribution& d) {
  const auto f = family_of(d);
  return f == BaseFamily::kLogNormal || f == BaseFamily::kLogLogistic ||
         f == BaseFamily::kLogStudent;
}

}  // namespace

TruncationWindow::TruncationWindow(double a, double b) : a_(a), b_(b) {
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) {
    throw std::domain_error("truncation window requires 0 < a < b < inf");
  }
  y_min_ = std::log(a);
  y_max_ = std::log(b);
}

TruncationWindow TruncationWindow::identity() { return TruncationWindow(1e-300, 1e300); }

bool reflect_window(const BaseDistribution& base, const TruncationWindow& window) {
  return is_symmetric_location_scale(base) && window.y_min() > params_of(base)[0];
}

double window_mass_below(const BaseDistribution& base, const TruncationWindow& window, double y) {
  if (reflect_window(base, window)) {
    // Both bounds in the upper half: difference of reflected lower-tail
    // probabilities avoids cancellation near 1.
    const double c2 = 2.0 * params_of(base)[0];
    return cdf_y(base, c2 - window.y_min()) - cdf_y(base, c2 - y);
  }
  return cdf_y(base, y) - cdf_y(base, window.y_min());
}

double window_mass(const BaseDistribution& base, const TruncationWindow& window) {
  const double mass = window_mass_below(base, window, window.y_max());
  if (!(mass > kMinMass)) throw MassTooSmall("truncation window captures negligible probability");
  return std::min(mass, 1.0);
}

double truncate_pdf(const BaseDistribution& base, const TruncationWindow& window, double x) {
  if (!(x > 0.0)) throw std::domain_error("size variable must be positive");
  const double mass = window_mass(base, window);
  if (!window.contains(x)) return 0.0;
  return pdf(base, x) / mass;
}

double truncate_log_pdf(const BaseDistribution& base, const TruncationWindow& window, double x) {
  if (!(x > 0.0)) throw std::domain_error("size variable must be positive");
  const double mass = window_mass(base, window);
  if (!window.contains(x)) return kNegInf;
  return log_pdf(base, x) - std::log(mass);
}

double truncate_cdf(const BaseDistribution& base, const TruncationWindow& window, double x) {
  if (!(x > 0.0)) throw std::domain_error("size variable must be positive");
  const double mass = window_mass(base, window);
  if (x <= window.a()) return 0.0;
  if (x >= window.b()) return 1.0;
  const double v = window_mass_below(base, window, std::log(x)) / mass;
  return std::clamp(v, 0.0, 1.0);
}

TruncatedMixture::TruncatedMixture(Mixture mixture, TruncationWindow window)
    : mixture_(std::move(mixture)), window_(window) {
  masses_.reserve(mixture_.size());
  log_masses_.reserve(mixture_.size());
  for (const auto& c : mixture_.components()) {
    const double m = window_mass(c, window_);
    masses_.push_back(m);
    log_masses_.push_back(std::log(m));
  }
}

double TruncatedMixture::component_pdf_y(std::size_t i, double y) const {
  if (!window_.contains_y(y)) return 0.0;
  return compdist::pdf_y(mixture_.components()[i], y) / masses_[i];
}

double TruncatedMixture::component_cdf_y(std::size_t i, double y) const {
  if (y <= window_.y_min()) return 0.0;
  if (y >= window_.y_max()) return 1.0;
  const double v = window_mass_below(mixture_.components()[i], window_, y) / masses_[i];
  return std::clamp(v, 0.0, 1.0);
}

double TruncatedMixture::pdf_y(double y) const {
  if (!window_.contains_y(y)) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < mixture_.size(); ++i) {
    if (mixture_.weights()[i] > 0.0) s += mixture_.weights()[i] * component_pdf_y(i, y);
  }
  return s;
}

double TruncatedMixture::log_pdf_y(double y) const {
  if (!window_.contains_y(y)) return kNegInf;
  double out;
  log_pdf_y(std::span<const double>(&y, 1), std::span<double>(&out, 1));
  return out;
}

double TruncatedMixture::cdf_y(double y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < mixture_.size(); ++i) {
    if (mixture_.weights()[i] > 0.0) s += mixture_.weights()[i] * component_cdf_y(i, y);
  }
  return s;
}

double TruncatedMixture::pdf(double x) const {
  const double y = detail::checked_log(x);
  return pdf_y(y) / x;
}

double TruncatedMixture::log_pdf(double x) const {
  const double y = detail::checked_log(x);
  return log_pdf_y(y) - y;
}

double TruncatedMixture::cdf(double x) const { return cdf_y(detail::checked_log(x)); }

void TruncatedMixture::log_pdf_y(std::span<const double> y, std::span<double> out) const {
  // Dividing component i by its mass is the same as reweighting it by
  // w_i / mass_i, so reuse the untruncated batch path with shifted weights.
  const std::size_t n = y.size();
  const std::size_t ell = mixture_.size();
  if (ell == 1) {
    compdist::log_pdf_y(mixture_.components().front(), y, out);
    for (double& v : out) v -= log_masses_.front();
  } else {
    thread_local std::vector<double> scratch;
    scratch.resize(n * ell);
    for (std::size_t c = 0; c < ell; ++c) {
      std::span<double> row(scratch.data() + c * n, n);
      const double w = mixture_.weights()[c];
      if (w > 0.0) {
        compdist::log_pdf_y(mixture_.components()[c], y, row);
        const double shift = std::log(w) - log_masses_[c];
        for (double& v : row) v += shift;
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
  for (std::size_t i = 0; i < n; ++i) {
    if (!window_.contains_y(y[i])) out[i] = kNegInf;
  }
}

TruncatedMixture truncate_mixture(const Mixture& mixture, const TruncationWindow& window) {
  return TruncatedMixture(mixture, window);
}

double pooled_truncated_pdf(const Mixture& mixture, const TruncationWindow& window, double x) {
  const double mass = mixture.cdf_y(window.y_max()) - mixture.cdf_y(window.y_min());
  if (!(mass > kMinMass)) throw MassTooSmall("truncation window captures negligible probability");
  if (!window.contains(x)) return 0.0;
  return mixture.pdf(x) / mass;
}

double pooled_truncated_cdf(const Mixture& mixture, const TruncationWindow& window, double x) {
  const double mass = mixture.cdf_y(window.y_max()) - mixture.cdf_y(window.y_min());
  if (!(mass > kMinMass)) throw MassTooSmall("truncation window captures negligible probability");
  if (x <= window.a()) return 0.0;
  if (x >= window.b()) return 1.0;
  return std::clamp((mixture.cdf(x) - mixture.cdf_y(window.y_min())) / mass, 0.0, 1.0);
}

std::size_t tail_drop_count(std::size_t n, double frac, RoundingRule rule) {
  // The tolerance keeps exact products such as 1000 * 0.1 from landing one
  // below the intended integer.
  const double raw = static_cast<double>(n) * frac;
  switch (rule) {
    case RoundingRule::kFloor: return static_cast<std::size_t>(std::floor(raw + 1e-9));
    case RoundingRule::kCeil: return static_cast<std::size_t>(std::ceil(raw - 1e-9));
    case RoundingRule::kNearest: return static_cast<std::size_t>(std::floor(raw + 0.5));
  }
  return 0;
}

EmpiricalWindow empirical_window(std::span<const double> sorted, double lower_frac,
                                 double upper_frac, RoundingRule rule) {
  if (!(lower_frac >= 0.0) || !(upper_frac >= 0.0) || !(lower_frac + upper_frac < 1.0)) {
    throw std::domain_error("empirical_window requires 0 <= lower + upper < 1");
  }
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw std::invalid_argument("empirical_window expects an ascending sample");
  }
  const std::size_t n = sorted.size();
  const std::size_t low = tail_drop_count(n, lower_frac, rule);
  const std::size_t high = tail_drop_count(n, upper_frac, rule);
  if (low + high >= n) throw EmptyAfterCleaning("no observations survive the truncation");
  std::vector<double> survivors(sorted.begin() + static_cast<std::ptrdiff_t>(low),
                                sorted.end() - static_cast<std::ptrdiff_t>(high));
  if (!(survivors.back() > survivors.front())) {
    throw EmptyAfterCleaning("surviving observations do not span a window");
  }
  TruncationWindow w(survivors.front(), survivors.back());
  return EmpiricalWindow{w, std::move(survivors), low, high};
}

}  // namespace compdist
