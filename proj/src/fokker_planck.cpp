#include "compdist/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "compdist/errors.hpp"
#include "compdist/model.hpp"
#include "compdist/sampling.hpp"
#include "compdist/special_functions.hpp"

namespace compdist {

namespace sf = special;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class D>
concept HasScore = requires(const D& d, double y) { d.score_y(y); };

double score_y(const BaseDistribution& d, double y) {
  return std::visit(
      [y](const auto& v) -> double {
        if constexpr (HasScore<std::decay_t<decltype(v)>>) {
          return v.score_y(y);
        } else {
          throw std::invalid_argument("score_y: family has no closed-form score");
        }
      },
      d);
}

double logistic(double u) {
  if (u == kInf) return 1.0;
  if (u == -kInf) return 0.0;
  return u >= 0.0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u));
}

// mu, log sigma per component, then stick-breaking logits (no floor).
std::vector<double> path_coordinates(const ModelSpec& spec, std::span<const double> p) {
  const int ell = spec.ell();
  std::vector<double> u(p.begin(), p.end());
  for (int i = 0; i < ell; ++i) u[2 * i + 1] = std::log(p[2 * i + 1]);
  double remaining = 1.0;
  for (int j = 0; j + 1 < ell; ++j) {
    const double w = p[2 * ell + j];
    if (remaining <= 1e-300) {
      u[2 * ell + j] = 0.0;
      continue;
    }
    const double v = std::clamp(w / remaining, 0.0, 1.0);
    u[2 * ell + j] = v >= 1.0 ? kInf : (v <= 0.0 ? -kInf : std::log(v) - std::log1p(-v));
    remaining -= w;
  }
  return u;
}

// Standardized log-Student (nu finite) or normal (nu infinite) pieces.
double std_pdf(double w, double nu) {
  if (std::isinf(nu)) return sf::std_normal_pdf(w);
  return std::exp(sf::student_log_norm(nu) - 0.5 * (nu + 1.0) * std::log1p(w * w / nu));
}

double std_cdf(double w, double nu) {
  if (std::isinf(nu)) return sf::std_normal_cdf(w);
  return sf::student_cdf(w, nu);
}

struct TruncPieces {
  double g_y, cdf_tt, g_min, g_max;
};

// The expansion of -(1/f) dcdf/dt for a component truncated to a moving
// window: the untruncated terms plus boundary contributions.
double k_from_pieces(double y, double mu, double sigma, double nu, double s, double mu_dot,
                     double sigma_dot, const PathState* st, const TruncPieces* tp) {
  double k = k_term(y, mu, sigma, nu, s, mu_dot, sigma_dot);
  if (!st || !st->truncated) return k;
  const double d_min = st->y_min_dot - mu_dot - sigma_dot * (st->y_min - mu) / sigma;
  const double d_max = st->y_max_dot - mu_dot - sigma_dot * (st->y_max - mu) / sigma;
  k += ((1.0 - tp->cdf_tt) * tp->g_min * d_min + tp->cdf_tt * tp->g_max * d_max) / tp->g_y;
  return k;
}

void require_in_window(const PathState& st, double y) {
  if (st.truncated && (y < st.y_min || y > st.y_max)) {
    throw OutOfWindow("y lies outside the truncation window");
  }
}

}  // namespace

// ---------------------------------------------------------------- PathState

Mixture PathState::mixture() const { return Mixture(components, weights); }

std::optional<TruncationWindow> PathState::window() const {
  if (!truncated) return std::nullopt;
  return TruncationWindow(std::exp(y_min), std::exp(y_max));
}

// ---------------------------------------------------------------- ParamPath

ParamPath::ParamPath(ModelSpec spec, double t0, double t1, std::vector<double> p0,
                     std::vector<double> p1, std::optional<TruncationWindow> w0,
                     std::optional<TruncationWindow> w1)
    : spec_(spec), t0_(t0), t1_(t1) {
  if (!spec.is_mixture_family()) {
    throw std::invalid_argument("ParamPath supports the LN, LL and log-Student mixture families");
  }
  if (!(t1 > t0)) throw std::invalid_argument("ParamPath: t1 must exceed t0");
  if (spec.truncated && !w0) throw std::invalid_argument("ParamPath: tt path needs a window");
  if (!spec.truncated && (w0 || w1)) throw std::invalid_argument("ParamPath: window on a non-tt path");
  if (w0 && !w1) w1 = w0;
  // Validates both endpoints.
  Model::from_params(spec, p0, w0);
  Model::from_params(spec, p1, w1);

  u0_ = path_coordinates(spec, p0);
  const auto u1 = path_coordinates(spec, p1);
  u_dot_.resize(u0_.size());
  for (std::size_t i = 0; i < u0_.size(); ++i) {
    if (u0_[i] == u1[i]) {
      u_dot_[i] = 0.0;
    } else if (std::isinf(u0_[i]) || std::isinf(u1[i])) {
      throw std::invalid_argument("ParamPath: a weight path would leave the simplex interior");
    } else {
      u_dot_[i] = (u1[i] - u0_[i]) / (t1 - t0);
    }
  }
  if (w0) {
    y_min0_ = w0->y_min();
    y_max0_ = w0->y_max();
    y_min_dot_ = (w1->y_min() - w0->y_min()) / (t1 - t0);
    y_max_dot_ = (w1->y_max() - w0->y_max()) / (t1 - t0);
  }
}

ParamPath ParamPath::constant(ModelSpec spec, std::vector<double> params,
                              std::optional<TruncationWindow> window) {
  return ParamPath(spec, 0.0, 1.0, params, params, window, window);
}

PathState ParamPath::at(double t) const {
  const int ell = spec_.ell();
  const double dt = t - t0_;
  auto coord = [&](std::size_t i) { return u_dot_[i] == 0.0 ? u0_[i] : u0_[i] + dt * u_dot_[i]; };
  const auto nus = spec_.fixed_nus();
  const BaseFamily fam = spec_.family();

  PathState st;
  st.t = t;
  for (int i = 0; i < ell; ++i) {
    const double mu = coord(2 * i);
    const double sigma = std::exp(coord(2 * i + 1));
    st.mu.push_back(mu);
    st.sigma.push_back(sigma);
    st.mu_dot.push_back(u_dot_[2 * i]);
    st.sigma_dot.push_back(sigma * u_dot_[2 * i + 1]);
    switch (fam) {
      case BaseFamily::kLogNormal:
        st.components.emplace_back(LogNormal(mu, sigma));
        st.nu.push_back(kInf);
        break;
      case BaseFamily::kLogLogistic:
        st.components.emplace_back(LogLogistic(mu, sigma));
        st.nu.push_back(kInf);
        break;
      default:
        st.components.emplace_back(LogStudent(mu, sigma, nus[i]));
        st.nu.push_back(nus[i]);
        break;
    }
  }
  double rem = 1.0;
  double rem_dot = 0.0;
  for (int j = 0; j + 1 < ell; ++j) {
    const double u = coord(2 * ell + j);
    const double v = logistic(u);
    const double v_dot = v * (1.0 - v) * u_dot_[2 * ell + j];
    st.weights.push_back(v * rem);
    st.weight_dots.push_back(v_dot * rem + v * rem_dot);
    rem_dot = rem_dot * (1.0 - v) - rem * v_dot;
    rem *= logistic(-u);
  }
  st.weights.push_back(rem);
  st.weight_dots.push_back(rem_dot);

  st.masses.assign(ell, 1.0);
  if (spec_.truncated) {
    st.truncated = true;
    st.y_min = y_min0_ + dt * y_min_dot_;
    st.y_max = y_max0_ + dt * y_max_dot_;
    st.y_min_dot = y_min_dot_;
    st.y_max_dot = y_max_dot_;
    for (int i = 0; i < ell; ++i) {
      const double m = cdf_y(st.components[i], st.y_max) - cdf_y(st.components[i], st.y_min);
      if (!(m > 1e-300)) throw MassTooSmall("component mass in the window is too small");
      st.masses[i] = m;
    }
  }
  return st;
}

// ---------------------------------------------------------------- path density

double path_pdf(const PathState& st, double y) {
  if (st.truncated && (y < st.y_min || y > st.y_max)) return 0.0;
  double f = 0.0;
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (st.weights[i] > 0.0) f += st.weights[i] * pdf_y(st.components[i], y) / st.masses[i];
  }
  return f;
}

double path_dpdf_dy(const PathState& st, double y) {
  if (st.truncated && (y < st.y_min || y > st.y_max)) return 0.0;
  double d = 0.0;
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (st.weights[i] <= 0.0) continue;
    const auto& c = st.components[i];
    d += st.weights[i] * pdf_y(c, y) * score_y(c, y) / st.masses[i];
  }
  return d;
}

namespace {

double component_cdf(const PathState& st, std::size_t i, double y) {
  const auto& c = st.components[i];
  if (!st.truncated) return cdf_y(c, y);
  if (y <= st.y_min) return 0.0;
  if (y >= st.y_max) return 1.0;
  return (cdf_y(c, y) - cdf_y(c, st.y_min)) / st.masses[i];
}

// d/dt of the untruncated component cdf at a fixed point z.
double cdf_time_derivative(const PathState& st, std::size_t i, double z) {
  if (std::isinf(z)) return 0.0;
  return -pdf_y(st.components[i], z) *
         (st.mu_dot[i] + st.sigma_dot[i] * (z - st.mu[i]) / st.sigma[i]);
}

}  // namespace

double path_cdf(const PathState& st, double y) {
  double F = 0.0;
  for (std::size_t i = 0; i < st.size(); ++i) F += st.weights[i] * component_cdf(st, i, y);
  return std::clamp(F, 0.0, 1.0);
}

double path_dcdf_dt(const PathState& st, double y) {
  double total = 0.0;
  for (std::size_t i = 0; i < st.size(); ++i) {
    const double F = component_cdf(st, i, y);
    double dF = 0.0;
    if (!st.truncated) {
      dF = cdf_time_derivative(st, i, y);
    } else if (y > st.y_min && y < st.y_max) {
      const auto& c = st.components[i];
      // Quotient rule on (G(y) - G(y_min)) / (G(y_max) - G(y_min)), each G
      // moving through its parameters and, at the bounds, through y_min/y_max.
      const double d_lo = pdf_y(c, st.y_min) * st.y_min_dot + cdf_time_derivative(st, i, st.y_min);
      const double d_hi = pdf_y(c, st.y_max) * st.y_max_dot + cdf_time_derivative(st, i, st.y_max);
      dF = (cdf_time_derivative(st, i, y) - d_lo) / st.masses[i] - F * (d_hi - d_lo) / st.masses[i];
    }
    total += st.weights[i] * dF + st.weight_dots[i] * F;
  }
  return total;
}

double generic_drift(const TimeDependentDensity& density, double s, double y, double t) {
  const double f = density.pdf(y, t);
  if (!(f >= 1e-300)) throw ZeroDensity("density vanishes at the drift evaluation point");
  return s * s / (2.0 * f) * density.dpdf_dy(y, t) - density.dcdf_dt(y, t) / f;
}

double generic_drift(const PathState& st, double s, double y) {
  require_in_window(st, y);
  const double f = path_pdf(st, y);
  if (!(f >= 1e-300)) throw ZeroDensity("density vanishes at the drift evaluation point");
  return s * s / (2.0 * f) * path_dpdf_dy(st, y) - path_dcdf_dt(st, y) / f;
}

const PathState& MixturePathDensity::state(double t) const {
  if (!cached_ || cached_->t != t) cached_ = path_.at(t);
  return *cached_;
}

double MixturePathDensity::pdf(double y, double t) const { return path_pdf(state(t), y); }
double MixturePathDensity::dpdf_dy(double y, double t) const { return path_dpdf_dy(state(t), y); }
double MixturePathDensity::cdf(double y, double t) const { return path_cdf(state(t), y); }
double MixturePathDensity::dcdf_dt(double y, double t) const { return path_dcdf_dt(state(t), y); }

// ---------------------------------------------------------------- closed forms

double k_term(double y, double mu, double sigma, double nu, double s, double mu_dot,
              double sigma_dot) {
  const double d = y - mu;
  const double transport = mu_dot + d * sigma_dot / sigma;
  if (std::isinf(nu)) return transport - s * s * d / (2.0 * sigma * sigma);
  return transport - s * s * (1.0 + nu) * d / (2.0 * (d * d + nu * sigma * sigma));
}

double k_term_truncated(double y, double y_min, double y_max, double y_min_dot, double y_max_dot,
                        double mu, double sigma, double nu, double s, double mu_dot,
                        double sigma_dot) {
  if (y < y_min || y > y_max) throw OutOfWindow("y lies outside the truncation window");
  PathState st;
  st.truncated = true;
  st.y_min = y_min;
  st.y_max = y_max;
  st.y_min_dot = y_min_dot;
  st.y_max_dot = y_max_dot;
  const double G_min = std_cdf((y_min - mu) / sigma, nu);
  const double G_max = std_cdf((y_max - mu) / sigma, nu);
  const double mass = G_max - G_min;
  TruncPieces tp{std_pdf((y - mu) / sigma, nu) / sigma,
                 (std_cdf((y - mu) / sigma, nu) - G_min) / mass,
                 std_pdf((y_min - mu) / sigma, nu) / sigma, std_pdf((y_max - mu) / sigma, nu) / sigma};
  return k_from_pieces(y, mu, sigma, nu, s, mu_dot, sigma_dot, &st, &tp);
}

std::vector<double> posteriors(const PathState& st, double y) {
  std::vector<double> tau(st.size(), 0.0);
  double top = -kInf;
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (st.weights[i] <= 0.0) {
      tau[i] = -kInf;
      continue;
    }
    tau[i] = std::log(st.weights[i]) + log_pdf_y(st.components[i], y) - std::log(st.masses[i]);
    top = std::max(top, tau[i]);
  }
  if (top == -kInf) throw ZeroDensity("all components vanish at y");
  double sum = 0.0;
  for (double& v : tau) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : tau) v /= sum;
  return tau;
}

double closed_form_drift(const PathState& st, double s, double y) {
  const BaseFamily fam = family_of(st.components.front());
  if (fam != BaseFamily::kLogStudent && fam != BaseFamily::kLogNormal) {
    throw std::invalid_argument("closed-form drift needs log-Student or lognormal components");
  }
  require_in_window(st, y);
  const double f = path_pdf(st, y);
  if (!(f >= 1e-300)) throw ZeroDensity("density vanishes at the drift evaluation point");
  const auto tau = posteriors(st, y);
  const std::size_t ell = st.size();
  double b = 0.0;
  for (std::size_t i = 0; i < ell; ++i) {
    if (tau[i] == 0.0) continue;
    TruncPieces tp{};
    if (st.truncated) {
      const auto& c = st.components[i];
      tp = {pdf_y(c, y), component_cdf(st, i, y), pdf_y(c, st.y_min), pdf_y(c, st.y_max)};
    }
    b += tau[i] * k_from_pieces(y, st.mu[i], st.sigma[i], st.nu[i], s, st.mu_dot[i],
                                st.sigma_dot[i], &st, &tp);
  }
  const double F_last = component_cdf(st, ell - 1, y);
  for (std::size_t j = 0; j + 1 < ell; ++j) {
    if (st.weight_dots[j] == 0.0) continue;
    b -= st.weight_dots[j] * (component_cdf(st, j, y) - F_last) / f;
  }
  return b;
}

DriftField::DriftField(double s_, ParamPath path_, DriftKind kind_)
    : s(s_), path(std::move(path_)), kind(kind_) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("diffusion constant s must be positive");
  const ModelSpec& spec = path.spec();
  if (kind == DriftKind::kFourLSt && !(spec.id == ModelId::k4LSt && !spec.truncated)) {
    throw std::invalid_argument("4LSt drift needs a 4LSt path");
  }
  if (kind == DriftKind::kFiveLStTT && !(spec.id == ModelId::k5LSt && spec.truncated)) {
    throw std::invalid_argument("5LSttt drift needs a 5LSttt path");
  }
}

double drift_4lst(double y, double t, const DriftField& field) {
  if (field.kind != DriftKind::kFourLSt) throw std::invalid_argument("field is not tagged 4LSt");
  return closed_form_drift(field.path.at(t), field.s, y);
}

double drift_5lsttt(double y, double t, const DriftField& field) {
  if (field.kind != DriftKind::kFiveLStTT) throw std::invalid_argument("field is not tagged 5LSttt");
  return closed_form_drift(field.path.at(t), field.s, y);
}

double drift(const DriftField& field, const PathState& st, double y) {
  if (field.kind == DriftKind::kGeneric) return generic_drift(st, field.s, y);
  return closed_form_drift(st, field.s, y);
}

double drift(const DriftField& field, double y, double t) { return drift(field, field.path.at(t), y); }

// ---------------------------------------------------------------- residual

namespace {

double residual_at(const DriftField& field, const PathState& before, const PathState& now,
                   const PathState& after, double y, double h_y, double h_t) {
  const double f_t = (path_pdf(after, y) - path_pdf(before, y)) / (2.0 * h_t);
  const double f_lo = path_pdf(now, y - h_y);
  const double f_mid = path_pdf(now, y);
  const double f_hi = path_pdf(now, y + h_y);
  const double flux =
      (drift(field, now, y + h_y) * f_hi - drift(field, now, y - h_y) * f_lo) / (2.0 * h_y);
  const double f_yy = (f_hi - 2.0 * f_mid + f_lo) / (h_y * h_y);
  return f_t + flux - 0.5 * field.s * field.s * f_yy;
}

}  // namespace

double fp_residual_at(const DriftField& field, double y, double t, double h_y, double h_t) {
  return residual_at(field, field.path.at(t - h_t), field.path.at(t), field.path.at(t + h_t), y,
                     h_y, h_t);
}

double fp_residual(const DriftField& field, std::span<const double> y_grid,
                   std::span<const double> t_grid, double h_y, double h_t) {
  double worst = 0.0;
  for (double t : t_grid) {
    const PathState before = field.path.at(t - h_t);
    const PathState now = field.path.at(t);
    const PathState after = field.path.at(t + h_t);
    for (double y : y_grid) {
      worst = std::max(worst, std::fabs(residual_at(field, before, now, after, y, h_y, h_t)));
    }
  }
  return worst;
}

ConvergenceStudy fp_convergence(const DriftField& field, std::span<const double> y_grid,
                                std::span<const double> t_grid, double h, int levels) {
  ConvergenceStudy out;
  for (int l = 0; l < levels; ++l) {
    out.h.push_back(h);
    out.residual.push_back(fp_residual(field, y_grid, t_grid, h, h));
    if (l > 0) out.order.push_back(std::log2(out.residual[l - 1] / out.residual[l]));
    h *= 0.5;
  }
  return out;
}

// ---------------------------------------------------------------- SDE

namespace {

// Drift sampled on a uniform grid, read back by 4-point Lagrange
// interpolation; points off the grid fall back to the exact evaluator.
class DriftTable {
 public:
  DriftTable(const DriftField& field, const PathState& st, double lo, double hi, std::size_t m)
      : field_(field), st_(st), lo_(lo), hi_(hi) {
    if (m >= 4 && hi > lo) {
      h_ = (hi - lo) / static_cast<double>(m - 1);
      values_.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        values_[i] = drift(field, st, i + 1 == m ? hi : lo + h_ * static_cast<double>(i));
      }
    }
  }

  double operator()(double y) const {
    if (values_.empty() || y < lo_ || y > hi_) return drift(field_, st_, y);
    const double pos = (y - lo_) / h_;
    const auto last = static_cast<long>(values_.size()) - 3;
    const long i = std::clamp(static_cast<long>(pos), 1L, last);
    const double s = pos - static_cast<double>(i);
    const double lm = -s * (s - 1.0) * (s - 2.0) / 6.0;
    const double l0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    const double l1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    const double l2 = (s + 1.0) * s * (s - 1.0) / 6.0;
    return lm * values_[i - 1] + l0 * values_[i] + l1 * values_[i + 1] + l2 * values_[i + 2];
  }

 private:
  const DriftField& field_;
  const PathState& st_;
  double lo_;
  double hi_;
  double h_ = 0.0;
  std::vector<double> values_;
};

double reflect(double y, double lo, double hi) {
  const double width = hi - lo;
  for (int i = 0; i < 64 && (y < lo || y > hi); ++i) {
    if (y < lo) y = 2.0 * lo - y;
    if (y > hi) y = 2.0 * hi - y;
  }
  if (y < lo || y > hi) y = lo + std::fmod(std::fabs(y - lo), width);
  return y;
}

}  // namespace

std::vector<double> simulate_sde(const DriftField& field, std::vector<double> y, double t0,
                                 double t1, const SdeOptions& options, const RngStream& stream) {
  if (options.n_steps == 0) throw std::invalid_argument("simulate_sde: n_steps must be positive");
  if (y.empty()) return y;
  const double dt = (t1 - t0) / static_cast<double>(options.n_steps);
  const double noise = field.s * std::sqrt(dt);
  const std::size_t block = std::max<std::size_t>(options.block_size, 1);
  const std::size_t n_blocks = (y.size() + block - 1) / block;
  std::vector<std::mt19937_64> engines;
  engines.reserve(n_blocks);
  for (std::size_t b = 0; b < n_blocks; ++b) engines.push_back(stream.substream(b).engine());
  std::vector<std::normal_distribution<double>> normals(n_blocks);

  for (std::size_t step = 0; step < options.n_steps; ++step) {
    const double t = t0 + dt * static_cast<double>(step);
    const PathState st = field.path.at(t);
    const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    const DriftTable table(field, st, *lo_it, *hi_it, options.table_points);
    std::optional<PathState> next;
    if (st.truncated) next = field.path.at(t0 + dt * static_cast<double>(step + 1));
    for (std::size_t b = 0; b < n_blocks; ++b) {
      auto& rng = engines[b];
      auto& normal = normals[b];
      const std::size_t end = std::min(y.size(), (b + 1) * block);
      for (std::size_t i = b * block; i < end; ++i) {
        double v = y[i] + table(y[i]) * dt + noise * normal(rng);
        if (next) v = reflect(v, next->y_min, next->y_max);
        y[i] = v;
      }
    }
  }
  return y;
}

std::vector<double> sample_path_y(const ParamPath& path, double t, std::size_t n,
                                  const RngStream& stream) {
  const PathState st = path.at(t);
  if (st.truncated) {
    auto y = sample_truncated_y(st.mixture(), *st.window(), n, stream);
    for (double& v : y) v = std::clamp(v, st.y_min, st.y_max);
    return y;
  }
  return sample_y(st.mixture(), n, stream);
}

}  // namespace compdist
