#include "compdist/model.hpp"

#include <cmath>
#include <stdexcept>

namespace compdist {

Model::Model(ModelSpec spec, Mixture mixture, std::optional<TruncationWindow> window)
    : spec_(spec), mixture_(std::move(mixture)), window_(window) {
  if (mixture_.family() != spec_.family()) {
    throw std::invalid_argument("model family does not match its components");
  }
  if (static_cast<int>(mixture_.size()) != spec_.ell()) {
    throw std::invalid_argument("model component count does not match its spec");
  }
  const auto nus = spec_.fixed_nus();
  for (std::size_t i = 0; i < nus.size(); ++i) {
    const auto& st = std::get<LogStudent>(mixture_.components()[i]);
    if (st.nu() != nus[i]) throw std::invalid_argument("log-Student nu does not match the spec");
  }
  if (spec_.truncated != window_.has_value()) {
    throw std::invalid_argument("tt models need a window and only tt models take one");
  }
  if (window_) truncated_.emplace(mixture_, *window_);
}

Model Model::from_params(ModelSpec spec, std::span<const double> p,
                         std::optional<TruncationWindow> window) {
  if (static_cast<int>(p.size()) != spec.k()) {
    throw std::invalid_argument("parameter vector length does not match k for " + spec.name());
  }
  const BaseFamily fam = spec.family();
  if (!spec.is_mixture_family() || spec.ell() == 1) {
    return Model(spec, Mixture::single(make_base(fam, p)), window);
  }
  const int ell = spec.ell();
  const auto nus = spec.fixed_nus();
  std::vector<BaseDistribution> comps;
  comps.reserve(ell);
  for (int i = 0; i < ell; ++i) {
    const double mu = p[2 * i];
    const double sigma = p[2 * i + 1];
    switch (fam) {
      case BaseFamily::kLogNormal: comps.emplace_back(LogNormal(mu, sigma)); break;
      case BaseFamily::kLogLogistic: comps.emplace_back(LogLogistic(mu, sigma)); break;
      default: comps.emplace_back(LogStudent(mu, sigma, nus.at(i))); break;
    }
  }
  return Model(spec, Mixture::from_free_weights(std::move(comps), p.subspan(2 * ell)), window);
}

std::vector<double> Model::params() const {
  if (!spec_.is_mixture_family() || spec_.ell() == 1) return params_of(mixture_.components()[0]);
  std::vector<double> out;
  out.reserve(spec_.k());
  for (const auto& c : mixture_.components()) {
    const auto cp = params_of(c);
    out.push_back(cp[0]);
    out.push_back(cp[1]);
  }
  for (double w : mixture_.free_weights()) out.push_back(w);
  return out;
}

std::vector<std::string> param_names(const ModelSpec& spec) {
  std::vector<std::string> out;
  auto append = [&](const auto& names) {
    for (auto n : names) out.emplace_back(n);
  };
  switch (spec.family()) {
    case BaseFamily::kDoubleParetoLogNormal: append(DoubleParetoLogNormal::kParamNames); return out;
    case BaseFamily::kGeneralizedBeta2: append(GeneralizedBeta2::kParamNames); return out;
    case BaseFamily::kLogSemiNonparametric: append(LogSemiNonparametric::kParamNames); return out;
    default: break;
  }
  if (spec.ell() == 1) {
    append(LogNormal::kParamNames);
    return out;
  }
  for (int i = 1; i <= spec.ell(); ++i) {
    out.push_back("mu" + std::to_string(i));
    out.push_back("sigma" + std::to_string(i));
  }
  for (int i = 1; i < spec.ell(); ++i) out.push_back("p" + std::to_string(i));
  return out;
}

std::vector<std::string> Model::param_names() const { return compdist::param_names(spec_); }

double Model::pdf(double x) const { return truncated_ ? truncated_->pdf(x) : mixture_.pdf(x); }
double Model::log_pdf(double x) const {
  return truncated_ ? truncated_->log_pdf(x) : mixture_.log_pdf(x);
}
double Model::cdf(double x) const { return truncated_ ? truncated_->cdf(x) : mixture_.cdf(x); }
double Model::pdf_y(double y) const {
  return truncated_ ? truncated_->pdf_y(y) : mixture_.pdf_y(y);
}
double Model::log_pdf_y(double y) const {
  return truncated_ ? truncated_->log_pdf_y(y) : mixture_.log_pdf_y(y);
}
double Model::cdf_y(double y) const {
  return truncated_ ? truncated_->cdf_y(y) : mixture_.cdf_y(y);
}

void Model::log_pdf_y(std::span<const double> y, std::span<double> out) const {
  if (truncated_) {
    truncated_->log_pdf_y(y, out);
  } else {
    mixture_.log_pdf_y(y, out);
  }
}

double Model::log_likelihood(std::span<const double> x) const {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = detail::checked_log(x[i]);
  std::vector<double> lp(x.size());
  log_pdf_y(y, lp);
  long double total = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) total += static_cast<long double>(lp[i]) - y[i];
  return static_cast<double>(total);
}

Model Model::canonical() const { return Model(spec_, canonicalize(mixture_), window_); }

}  // namespace compdist
