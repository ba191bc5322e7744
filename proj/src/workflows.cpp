#include "compdist/workflows.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "compdist/errors.hpp"

namespace compdist {

RoundingRule parse_rounding(const std::string& name) {
  if (name == "floor") return RoundingRule::kFloor;
  if (name == "ceil") return RoundingRule::kCeil;
  if (name == "nearest") return RoundingRule::kNearest;
  throw std::invalid_argument("unknown rounding rule: " + name);
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig cfg) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw IoError(e.what());
  }
  // Flatten: top-level keys and keys inside any section are equivalent.
  std::map<std::string, std::string> kv;
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      kv[key] = node.data();
    } else {
      for (const auto& [sub, leaf] : node) kv[sub] = leaf.data();
    }
  }
  auto get = [&](const char* key, auto& target) {
    const auto it = kv.find(key);
    if (it == kv.end()) return;
    std::istringstream in(it->second);
    std::remove_reference_t<decltype(target)> v{};
    if (!(in >> v)) throw std::invalid_argument(std::string("bad value for config key ") + key);
    target = v;
  };
  get("max_evals", cfg.fit.max_evals);
  get("simplex_tol", cfg.fit.simplex_tol);
  get("value_tol", cfg.fit.value_tol);
  get("n_starts", cfg.fit.n_starts);
  get("seed", cfg.fit.seed);
  get("se_step", cfg.fit.se_step);
  get("verify_width_se", cfg.fit.verify_width_se);
  get("lower_frac", cfg.lower_frac);
  get("upper_frac", cfg.upper_frac);
  get("n_perm", cfg.n_perm);
  if (auto it = kv.find("models"); it != kv.end()) cfg.models = it->second;
  if (auto it = kv.find("format"); it != kv.end()) cfg.format = it->second;
  if (auto it = kv.find("rounding"); it != kv.end()) cfg.rounding = parse_rounding(it->second);
  if (auto it = kv.find("oos_ic_n"); it != kv.end()) {
    if (it->second != "oos" && it->second != "in") throw std::invalid_argument("oos_ic_n must be oos or in");
    cfg.oos_ic_uses_oos_n = it->second == "oos";
  }
  return cfg;
}

std::vector<FitOutcome> fit_battery(std::span<const ModelSpec> models, std::span<const double> x,
                                    const std::optional<TruncationWindow>& window,
                                    const FitConfig& cfg) {
  std::vector<std::size_t> order(models.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return models[a].ell() < models[b].ell(); });

  std::vector<FitOutcome> out(models.size());
  std::map<std::string, FittedModel> done;
  for (std::size_t i : order) {
    const ModelSpec& spec = models[i];
    out[i].spec = spec;
    try {
      const auto warm = warm_starts_from(done, spec);
      const auto w = spec.truncated ? window : std::nullopt;
      out[i].fit = fit_mle(spec, x, w, cfg, warm);
      done.emplace(spec.name(), *out[i].fit);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

namespace {

SelectionRow row_for(const FitOutcome& outcome, std::span<const double> eval_x, double loglik,
                     std::size_t ic_n) {
  const Model model = outcome.fit->model();
  const auto g = gof_report(eval_x, model);
  return make_row(outcome.spec, loglik, ic_n, g.ks, g.cm, g.ad);
}

void finish(WorkflowResult& r) {
  for (const auto& f : r.fits) r.not_estimable += f.fit ? 0 : 1;
  assign_flags(r.table);
}

std::vector<ModelSpec> as_truncated(std::span<const ModelSpec> models, bool truncated) {
  std::vector<ModelSpec> out(models.begin(), models.end());
  for (auto& m : out) m.truncated = truncated;
  return out;
}

}  // namespace

WorkflowResult run_full_workflow(const Dataset& ds, std::span<const ModelSpec> models,
                                 const RunConfig& cfg) {
  WorkflowResult r;
  r.table.sample_id = ds.label;
  const auto specs = as_truncated(models, false);
  r.fits = fit_battery(specs, ds.values, std::nullopt, cfg.fit);
  for (const auto& f : r.fits) {
    r.table.rows.push_back(f.fit ? row_for(f, ds.values, f.fit->loglik, ds.size())
                                 : blank_row(f.spec, f.error));
  }
  finish(r);
  return r;
}

WorkflowResult run_is_oos_workflow(const Dataset& ds, std::span<const ModelSpec> models,
                                   const RunConfig& cfg) {
  WorkflowResult r;
  r.table.sample_id = ds.label;
  const auto [in, out] = split_75_25(ds, cfg.fit.seed);
  r.split_test = two_sample_tests(in.values, out.values, cfg.n_perm, cfg.fit.seed);
  const auto specs = as_truncated(models, false);
  r.fits = fit_battery(specs, in.values, std::nullopt, cfg.fit);
  const std::size_t ic_n = cfg.oos_ic_uses_oos_n ? out.size() : in.size();
  for (const auto& f : r.fits) {
    if (!f.fit) {
      r.table.rows.push_back(blank_row(f.spec, f.error));
      continue;
    }
    const double ll = f.fit->model().log_likelihood(out.values);
    r.table.rows.push_back(row_for(f, out.values, ll, ic_n));
  }
  finish(r);
  return r;
}

WorkflowResult run_tt_workflow(const Dataset& ds, std::span<const ModelSpec> models,
                               const RunConfig& cfg,
                               const std::optional<TruncationWindow>& window_override) {
  WorkflowResult r;
  r.table.sample_id = ds.label;
  EmpiricalWindow ew = empirical_window(ds.values, cfg.lower_frac, cfg.upper_frac, cfg.rounding);
  if (window_override) {
    ew.window = *window_override;
    std::vector<double> kept;
    for (double v : ds.values) {
      if (window_override->contains(v)) kept.push_back(v);
    }
    ew.dropped_low = ew.dropped_high = 0;
    for (double v : ds.values) {
      ew.dropped_low += v < window_override->a();
      ew.dropped_high += v > window_override->b();
    }
    ew.survivors = std::move(kept);
  }
  const auto specs = as_truncated(models, true);
  r.fits = fit_battery(specs, ew.survivors, ew.window, cfg.fit);
  for (const auto& f : r.fits) {
    r.table.rows.push_back(f.fit ? row_for(f, ew.survivors, f.fit->loglik, ew.survivors.size())
                                 : blank_row(f.spec, f.error));
  }
  r.window = std::move(ew);
  finish(r);
  return r;
}

}  // namespace compdist
