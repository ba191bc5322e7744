#include "compdist/estimation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "compdist/errors.hpp"
#include "compdist/rng.hpp"

namespace compdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double logistic(double u) { return u >= 0.0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u)); }

double logit(double v) {
  v = std::clamp(v, 1e-300, 1.0 - 1e-16);
  return std::log(v) - std::log1p(-v);
}

struct Moments {
  double mean;
  double sd;
};

Moments moments(std::span<const double> y) {
  long double s = 0.0L;
  for (double v : y) s += v;
  const double mean = static_cast<double>(s / y.size());
  long double ss = 0.0L;
  for (double v : y) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(static_cast<double>(ss / y.size()))};
}

// Exponential tail rates of ln-data: inverse mean excess over the top and
// bottom 5% thresholds.
std::pair<double, double> tail_rates(std::span<const double> sorted_y) {
  const std::size_t n = sorted_y.size();
  const std::size_t m = std::max<std::size_t>(10, n / 20);
  const double hi = sorted_y[n - m - 1];
  const double lo = sorted_y[m];
  long double up = 0.0L;
  long double down = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    up += sorted_y[n - 1 - i] - hi;
    down += lo - sorted_y[i];
  }
  return {static_cast<double>(m / up), static_cast<double>(m / down)};
}

std::uint64_t spec_stream(const ModelSpec& spec) {
  return static_cast<std::uint64_t>(spec.id) * 2 + (spec.truncated ? 1 : 0);
}

std::vector<double> dpln_start(const Moments& mo, std::pair<double, double> rates) {
  const double sd = mo.sd;
  const double alpha = std::clamp(rates.first, 0.3 / sd, 20.0 / sd);
  const double beta = std::clamp(rates.second, 0.3 / sd, 20.0 / sd);
  const double var = sd * sd;
  const double sigma2 = std::max(var - 1.0 / (alpha * alpha) - 1.0 / (beta * beta), 0.1 * var);
  return {alpha, beta, mo.mean - 1.0 / alpha + 1.0 / beta, std::sqrt(sigma2)};
}

// Upper/lower exponential tail rates of ln x under GB2 are a q and a p; the
// variance (psi'(p) + psi'(q)) / a^2 pins down a.
std::vector<double> gb2_start(const Moments& mo, std::pair<double, double> rates) {
  namespace bm = boost::math;
  const double var = mo.sd * mo.sd;
  const double aq = std::clamp(rates.first, 0.3 / mo.sd, 20.0 / mo.sd);
  const double ap = std::clamp(rates.second, 0.3 / mo.sd, 20.0 / mo.sd);
  auto variance_at = [&](double a) {
    return (bm::trigamma(ap / a) + bm::trigamma(aq / a)) / (a * a);
  };
  double lo = 1e-3 / mo.sd;
  double hi = 1e3 / mo.sd;
  double a = hi;
  if (variance_at(hi) < var) {
    for (int i = 0; i < 200; ++i) {
      const double mid = std::sqrt(lo * hi);
      (variance_at(mid) > var ? lo : hi) = mid;
    }
    a = std::sqrt(lo * hi);
  }
  const double p = ap / a;
  const double q = aq / a;
  const double log_b = mo.mean - (bm::digamma(p) - bm::digamma(q)) / a;
  return {a, std::exp(log_b), p, q};
}

double component_scale(BaseFamily family, double sd, double nu) {
  switch (family) {
    case BaseFamily::kLogLogistic: return sd * std::sqrt(3.0) / 3.14159265358979323846;
    case BaseFamily::kLogStudent: return nu > 2.5 ? sd * std::sqrt((nu - 2.0) / nu) : 0.6 * sd;
    default: return sd;
  }
}

// (mu_i, sigma_i) from contiguous blocks of the sorted ln-data split at the
// given fractions, weights proportional to block sizes.
std::vector<double> block_start(const ModelSpec& spec, std::span<const double> sorted_y,
                                const std::vector<double>& cuts, const std::vector<int>& assign,
                                double overall_sd) {
  const int ell = spec.ell();
  const std::size_t n = sorted_y.size();
  const auto nus = spec.fixed_nus();
  std::vector<std::size_t> edges{0};
  for (double c : cuts) edges.push_back(static_cast<std::size_t>(std::llround(c * n)));
  edges.push_back(n);
  std::vector<double> mu(ell), sd(ell), w(ell);
  for (int b = 0; b < ell; ++b) {
    const auto block = sorted_y.subspan(edges[b], std::max<std::size_t>(edges[b + 1] - edges[b], 1));
    const auto mo = moments(block);
    mu[b] = mo.mean;
    sd[b] = std::max(mo.sd, 0.05 * overall_sd);
    w[b] = std::max(static_cast<double>(block.size()) / n, 1e-3);
  }
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> out(3 * ell - 1);
  std::vector<double> weights(ell);
  for (int i = 0; i < ell; ++i) {
    const int b = assign[i];
    out[2 * i] = mu[b];
    out[2 * i + 1] = component_scale(spec.family(), sd[b], nus.empty() ? 0.0 : nus[i]);
    weights[i] = w[b] / wsum;
  }
  for (int i = 0; i + 1 < ell; ++i) out[2 * ell + i] = weights[i];
  return out;
}

void require_valid_sample(std::span<const double> x) {
  for (double v : x) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("sample values must be positive and finite");
  }
}

}  // namespace

// ---------------------------------------------------------------- transform

ParamTransform::ParamTransform(ModelSpec spec, double sigma_floor)
    : spec_(spec), sigma_floor_(spec.ell() > 1 ? sigma_floor : 0.0) {}

std::vector<double> ParamTransform::to_unconstrained(std::span<const double> p) const {
  std::vector<double> u(p.begin(), p.end());
  switch (spec_.family()) {
    case BaseFamily::kDoubleParetoLogNormal:
      u[0] = std::log(p[0]);
      u[1] = std::log(p[1]);
      u[3] = std::log(p[3]);
      return u;
    case BaseFamily::kGeneralizedBeta2:
      for (int i = 0; i < 4; ++i) u[i] = std::log(p[i]);
      return u;
    case BaseFamily::kLogSemiNonparametric:
      u[1] = std::log(p[1]);
      return u;
    default: break;
  }
  const int ell = spec_.ell();
  for (int i = 0; i < ell; ++i) {
    u[2 * i + 1] = std::log(std::max(p[2 * i + 1] - sigma_floor_, 1e-3 * sigma_floor_));
  }
  const double span = 1.0 - ell * kWeightFloor;
  double remaining = 1.0;
  for (int j = 0; j + 1 < ell; ++j) {
    const double q = std::max((p[2 * ell + j] - kWeightFloor) / span, 0.0);
    u[2 * ell + j] = logit(remaining > 0.0 ? q / remaining : 1.0);
    remaining -= q;
  }
  return u;
}

std::vector<double> ParamTransform::to_natural(std::span<const double> u) const {
  std::vector<double> p(u.begin(), u.end());
  switch (spec_.family()) {
    case BaseFamily::kDoubleParetoLogNormal:
      p[0] = std::exp(u[0]);
      p[1] = std::exp(u[1]);
      p[3] = std::exp(u[3]);
      return p;
    case BaseFamily::kGeneralizedBeta2:
      for (int i = 0; i < 4; ++i) p[i] = std::exp(u[i]);
      return p;
    case BaseFamily::kLogSemiNonparametric:
      p[1] = std::exp(u[1]);
      return p;
    default: break;
  }
  const int ell = spec_.ell();
  for (int i = 0; i < ell; ++i) p[2 * i + 1] = sigma_floor_ + std::exp(u[2 * i + 1]);
  const double span = 1.0 - ell * kWeightFloor;
  double remaining = 1.0;
  for (int j = 0; j + 1 < ell; ++j) {
    const double v = logistic(u[2 * ell + j]);
    p[2 * ell + j] = kWeightFloor + span * remaining * v;
    remaining *= logistic(-u[2 * ell + j]);
  }
  return p;
}

// ---------------------------------------------------------------- objective

FitObjective::FitObjective(ModelSpec spec, std::span<const double> x,
                           std::optional<TruncationWindow> window)
    : transform_(spec), window_(window), y_(x.size()), scratch_(x.size()) {
  require_valid_sample(x);
  if (spec.truncated != window.has_value()) {
    throw std::invalid_argument("tt models need a window and only tt models take one");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (window_ && !window_->contains(x[i])) {
      throw std::invalid_argument("sample value outside the truncation window");
    }
    y_[i] = std::log(x[i]);
    sum_y_ += y_[i];
  }
  const long double mean = sum_y_ / static_cast<long double>(y_.size());
  long double ss = 0.0L;
  for (double v : y_) ss += (v - mean) * (v - mean);
  const double sd = static_cast<double>(std::sqrt(ss / static_cast<long double>(y_.size())));
  transform_ = ParamTransform(spec, kMinSigmaFrac * sd);
}

long double FitObjective::log_likelihood_u(std::span<const double> u) const {
  constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();
  for (double v : u) {
    if (!std::isfinite(v)) return kNegInf;
  }
  const auto natural = transform_.to_natural(u);
  try {
    const Model model = Model::from_params(transform_.spec(), natural, window_);
    if (transform_.spec().family() == BaseFamily::kLogSemiNonparametric &&
        !std::get<LogSemiNonparametric>(model.mixture().components()[0]).is_feasible()) {
      return kNegInf;
    }
    model.log_pdf_y(y_, scratch_);
  } catch (const std::exception&) {
    return kNegInf;
  }
  long double total = 0.0L;
  for (double v : scratch_) total += v;
  if (!std::isfinite(static_cast<double>(total))) return kNegInf;
  return total - sum_y_;
}

double FitObjective::operator()(std::span<const double> u) const {
  const long double ll = log_likelihood_u(u);
  if (!std::isfinite(static_cast<double>(ll))) return kInf;
  return static_cast<double>(-(ll + sum_y_) / static_cast<long double>(y_.size()));
}

// ---------------------------------------------------------------- starts

std::vector<std::vector<double>> starting_points(const ModelSpec& spec,
                                                 std::span<const double> sorted_y, int n_starts,
                                                 std::uint64_t seed) {
  auto rng = RngStream{seed, spec_stream(spec)}.engine();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  const auto mo = moments(sorted_y);
  std::vector<std::vector<double>> out;
  out.reserve(n_starts);

  switch (spec.family()) {
    case BaseFamily::kDoubleParetoLogNormal:
    case BaseFamily::kGeneralizedBeta2: {
      const auto rates = tail_rates(sorted_y);
      const bool dpln = spec.family() == BaseFamily::kDoubleParetoLogNormal;
      const auto base = dpln ? dpln_start(mo, rates) : gb2_start(mo, rates);
      out.push_back(base);
      if (!dpln && n_starts > 1) {
        // Log-logistic member of the family.
        const double a = 3.14159265358979323846 / (std::sqrt(3.0) * mo.sd);
        out.push_back({a, std::exp(mo.mean), 1.0, 1.0});
      }
      while (static_cast<int>(out.size()) < n_starts) {
        auto r = rates;
        r.first *= std::exp(0.3 * normal(rng));
        r.second *= std::exp(0.3 * normal(rng));
        out.push_back(dpln ? dpln_start(mo, r) : gb2_start(mo, r));
      }
      return out;
    }
    case BaseFamily::kLogSemiNonparametric: {
      out.push_back({mo.mean, mo.sd, 0.0, 0.0, 0.0, 0.0});
      while (static_cast<int>(out.size()) < n_starts) {
        std::vector<double> s{mo.mean + 0.1 * mo.sd * normal(rng), mo.sd * std::exp(0.1 * normal(rng))};
        for (int i = 0; i < 4; ++i) s.push_back(0.02 * normal(rng));
        out.push_back(std::move(s));
      }
      return out;
    }
    default: break;
  }

  const int ell = spec.ell();
  if (ell == 1) {
    const double scale = component_scale(spec.family(), mo.sd, 0.0);
    out.push_back({mo.mean, scale});
    while (static_cast<int>(out.size()) < n_starts) {
      out.push_back({mo.mean + 0.2 * mo.sd * normal(rng), scale * std::exp(0.2 * normal(rng))});
    }
    return out;
  }

  std::vector<int> identity(ell);
  std::iota(identity.begin(), identity.end(), 0);
  std::vector<double> cuts(ell - 1);
  for (int j = 0; j + 1 < ell; ++j) cuts[j] = static_cast<double>(j + 1) / ell;
  out.push_back(block_start(spec, sorted_y, cuts, identity, mo.sd));
  const bool student = spec.family() == BaseFamily::kLogStudent;
  while (static_cast<int>(out.size()) < n_starts) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      for (double& c : cuts) c = unif(rng);
      std::sort(cuts.begin(), cuts.end());
      bool ok = cuts.front() >= 0.02 && cuts.back() <= 0.98;
      for (std::size_t j = 1; j < cuts.size(); ++j) ok = ok && cuts[j] - cuts[j - 1] >= 0.02;
      if (ok) break;
    }
    auto assign = identity;
    // Log-Student components carry distinct fixed nu, so which block seeds
    // which component matters; vary it across starts.
    if (student && out.size() % 2 == 0) std::shuffle(assign.begin(), assign.end(), rng);
    auto s = block_start(spec, sorted_y, cuts, assign, mo.sd);
    for (int i = 0; i < ell; ++i) s[2 * i + 1] *= std::exp(0.1 * normal(rng));
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------- standard errors

namespace {

StandardErrors standard_errors_u(const FitObjective& objective, std::span<const double> u0,
                                 double se_step) {
  const std::size_t d = u0.size();
  StandardErrors out;
  out.natural.assign(d, kNaN);
  out.unconstrained.assign(d, kNaN);
  std::vector<double> u(u0.begin(), u0.end());
  std::vector<double> h(d);
  for (std::size_t i = 0; i < d; ++i) h[i] = se_step * std::max(1.0, std::fabs(u0[i]));

  auto ll = [&]() { return objective.log_likelihood_u(u); };
  const long double center = ll();
  Eigen::MatrixXd hess(d, d);
  bool finite = std::isfinite(static_cast<double>(center));
  for (std::size_t i = 0; i < d && finite; ++i) {
    u[i] = u0[i] + h[i];
    const long double fp = ll();
    u[i] = u0[i] - h[i];
    const long double fm = ll();
    u[i] = u0[i];
    hess(i, i) = static_cast<double>((fp - 2.0L * center + fm) / (static_cast<long double>(h[i]) * h[i]));
    for (std::size_t j = 0; j < i; ++j) {
      long double acc = 0.0L;
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          u[i] = u0[i] + si * h[i];
          u[j] = u0[j] + sj * h[j];
          acc += si * sj * ll();
        }
      }
      u[i] = u0[i];
      u[j] = u0[j];
      hess(i, j) = hess(j, i) = static_cast<double>(acc / (4.0L * h[i] * h[j]));
    }
    finite = finite && hess.row(i).allFinite();
  }
  if (!finite) {
    out.singular = true;
    return out;
  }
  const Eigen::MatrixXd info = -hess;
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() != Eigen::Success) {
    out.singular = true;
    return out;
  }
  const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(d, d));

  // Delta method: Jacobian of the natural parameters w.r.t. u.
  const auto& tr = objective.transform();
  Eigen::MatrixXd jac(d, d);
  std::vector<double> up(u0.begin(), u0.end());
  for (std::size_t j = 0; j < d; ++j) {
    const double step = 1e-6 * std::max(1.0, std::fabs(u0[j]));
    up[j] = u0[j] + step;
    const auto plus = tr.to_natural(up);
    up[j] = u0[j] - step;
    const auto minus = tr.to_natural(up);
    up[j] = u0[j];
    for (std::size_t i = 0; i < d; ++i) jac(i, j) = (plus[i] - minus[i]) / (2.0 * step);
  }
  const Eigen::MatrixXd cov_nat = jac * cov * jac.transpose();
  for (std::size_t i = 0; i < d; ++i) {
    out.unconstrained[i] = std::sqrt(std::max(cov(i, i), 0.0));
    out.natural[i] = std::sqrt(std::max(cov_nat(i, i), 0.0));
  }
  return out;
}

std::vector<double> canonical_u(const ParamTransform& tr, std::span<const double> u,
                                const std::optional<TruncationWindow>& window) {
  const auto natural = tr.to_natural(u);
  const auto params = Model::from_params(tr.spec(), natural, window).canonical().params();
  return tr.to_unconstrained(params);
}

}  // namespace

StandardErrors standard_errors(const ModelSpec& spec, std::span<const double> natural,
                               std::span<const double> x,
                               const std::optional<TruncationWindow>& window, double se_step) {
  const FitObjective objective(spec, x, window);
  const auto u = objective.transform().to_unconstrained(natural);
  return standard_errors_u(objective, u, se_step);
}

// ---------------------------------------------------------------- fit

FittedModel fit_mle(const ModelSpec& spec, std::span<const double> x,
                    const std::optional<TruncationWindow>& window, const FitConfig& cfg,
                    std::span<const std::vector<double>> warm_starts) {
  if (x.size() < static_cast<std::size_t>(10 * spec.k())) {
    throw std::invalid_argument("fit_mle: " + spec.name() + " needs at least 10 k observations");
  }
  const FitObjective objective(spec, x, window);
  const auto& tr = objective.transform();
  std::vector<double> sorted_y(objective.log_data().begin(), objective.log_data().end());
  std::sort(sorted_y.begin(), sorted_y.end());

  std::vector<std::vector<double>> starts(warm_starts.begin(), warm_starts.end());
  for (auto& s : starting_points(spec, sorted_y, std::max(cfg.n_starts, 1), cfg.seed)) {
    starts.push_back(std::move(s));
  }

  NelderMeadOptions nm;
  nm.max_evals = cfg.max_evals;
  nm.simplex_tol = cfg.simplex_tol;
  nm.value_tol = cfg.value_tol;

  const double n = static_cast<double>(x.size());
  long evals = 0;
  std::vector<NelderMeadResult> runs;
  for (const auto& s : starts) {
    std::vector<double> u0;
    try {
      u0 = tr.to_unconstrained(s);
    } catch (const std::exception&) {
      continue;
    }
    if (!std::isfinite(objective(u0))) continue;
    try {
      runs.push_back(nelder_mead(objective, u0, nm));
      evals += runs.back().evals;
    } catch (const NonFiniteObjective&) {
    }
  }
  const NelderMeadResult* best = nullptr;
  for (const auto& r : runs) {
    if (r.converged && std::isfinite(r.value) && (!best || r.value < best->value)) best = &r;
  }
  if (!best) throw NotEstimable(spec.name() + ": no starting point converged");

  FittedModel fit;
  fit.spec = spec;
  fit.window = window;
  fit.n = x.size();
  fit.converged = true;
  const double best_ll = -best->value * n;
  for (const auto& r : runs) {
    if (r.converged && std::fabs(-r.value * n - best_ll) <= 1e-4 + 1e-10 * std::fabs(best_ll)) {
      ++fit.starts_agreeing;
    }
  }

  // Perturbation check: scan each transformed coordinate over +-width SEs
  // and re-optimize from any point that beats the incumbent.
  std::vector<double> u = canonical_u(tr, best->argmin, window);
  StandardErrors se;
  for (int round = 0;; ++round) {
    se = standard_errors_u(objective, u, cfg.se_step);
    const long double ll0 = objective.log_likelihood_u(u);
    const double slack = 1e-8 * std::fabs(static_cast<double>(ll0));
    std::vector<double> trial = u;
    std::vector<double> better;
    long double better_ll = ll0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      double half = cfg.verify_width_se * se.unconstrained[i];
      if (!std::isfinite(half) || half <= 0.0) half = 1e-2 * std::max(1.0, std::fabs(u[i]));
      for (int g = -4; g <= 4; ++g) {
        if (g == 0) continue;
        trial[i] = u[i] + half * g / 4.0;
        const long double ll = objective.log_likelihood_u(trial);
        evals += 1;
        if (ll > better_ll + slack) {
          better_ll = ll;
          better = trial;
        }
      }
      trial[i] = u[i];
    }
    if (better.empty() || round >= 3) break;
    ++fit.verification_rounds;
    const auto rerun = nelder_mead(objective, better, nm);
    evals += rerun.evals;
    u = canonical_u(tr, rerun.argmin, window);
  }

  fit.params = tr.to_natural(u);
  fit.loglik = static_cast<double>(objective.log_likelihood_u(u));
  fit.std_errors = se.natural;
  fit.singular_information = se.singular;
  fit.evals = evals;
  return fit;
}

// ---------------------------------------------------------------- nesting

std::optional<std::vector<double>> nested_warm_start(const FittedModel& fitted,
                                                     const ModelSpec& target) {
  const ModelSpec& src = fitted.spec;
  if (src.truncated != target.truncated || src == target) return std::nullopt;
  const auto& p = fitted.params;

  if (target.family() == BaseFamily::kLogSemiNonparametric && src.id == ModelId::kLN) {
    return std::vector<double>{p[0], p[1], 0.0, 0.0, 0.0, 0.0};
  }
  if (!src.is_mixture_family() || src.family() != target.family() || target.ell() <= src.ell()) {
    return std::nullopt;
  }

  struct Comp {
    double mu, sigma, w, nu;
  };
  const int ell = src.ell();
  const auto src_nus = src.fixed_nus();
  std::vector<Comp> comps;
  double wsum = 0.0;
  for (int i = 0; i < ell; ++i) {
    const double w = i + 1 < ell ? p[2 * ell + i] : 1.0 - wsum;
    wsum += w;
    comps.push_back({p[2 * i], p[2 * i + 1], w, src_nus.empty() ? 0.0 : src_nus[i]});
  }

  std::vector<Comp> out;
  if (target.family() == BaseFamily::kLogStudent) {
    // Keep components whose nu the target shares; add the missing ones as
    // copies of the nearest smaller-nu component carrying a tiny weight.
    for (double nu : target.fixed_nus()) {
      auto same = std::find_if(comps.begin(), comps.end(), [&](const Comp& c) { return c.nu == nu; });
      if (same != comps.end()) {
        out.push_back(*same);
        continue;
      }
      const Comp* donor = &comps.front();
      for (const auto& c : comps) {
        if (c.nu < nu) donor = &c;
      }
      out.push_back({donor->mu, donor->sigma, 0.0, nu});
    }
    for (const auto& c : comps) {
      if (std::none_of(out.begin(), out.end(), [&](const Comp& o) { return o.nu == c.nu; })) {
        return std::nullopt;
      }
    }
    for (auto& o : out) {
      if (o.w > 0.0) continue;
      auto donor = out.begin();
      for (auto it = out.begin(); it != out.end(); ++it) {
        if (it->w > 0.0 && it->nu < o.nu) donor = it;
      }
      o.w = 1e-6 * donor->w;
      donor->w -= o.w;
    }
  } else {
    // Splitting a component into two identical halves leaves the density
    // unchanged, so the larger model starts exactly at the smaller optimum.
    out = comps;
    while (static_cast<int>(out.size()) < target.ell()) {
      auto heaviest = std::max_element(out.begin(), out.end(),
                                       [](const Comp& a, const Comp& b) { return a.w < b.w; });
      heaviest->w *= 0.5;
      const Comp copy = *heaviest;
      out.insert(heaviest + 1, copy);
    }
  }
  std::vector<double> natural;
  for (const auto& c : out) {
    natural.push_back(c.mu);
    natural.push_back(c.sigma);
  }
  for (std::size_t i = 0; i + 1 < out.size(); ++i) natural.push_back(out[i].w);
  return natural;
}

std::vector<std::vector<double>> warm_starts_from(const std::map<std::string, FittedModel>& fits,
                                                  const ModelSpec& target) {
  std::vector<std::vector<double>> out;
  for (const auto& [name, fit] : fits) {
    if (auto s = nested_warm_start(fit, target)) out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace compdist
