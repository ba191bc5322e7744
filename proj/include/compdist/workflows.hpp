#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "compdist/dataset.hpp"
#include "compdist/estimation.hpp"
#include "compdist/gof.hpp"
#include "compdist/selection.hpp"
#include "compdist/truncation.hpp"

namespace compdist {

struct RunConfig {
  FitConfig fit;
  std::string models = "all";
  double lower_frac = 0.10;
  double upper_frac = 0.001;
  RoundingRule rounding = RoundingRule::kFloor;
  /// n entering BIC/HQC in the in-sample/out-of-sample workflow: the
  /// out-of-sample size when true, the in-sample size otherwise.
  bool oos_ic_uses_oos_n = true;
  int n_perm = 999;
  std::string format = "json";
};

/// Reads a key = value file (INI syntax; sections ignored for lookup of the
/// keys below) on top of `base`. Keys: max_evals, simplex_tol, value_tol,
/// n_starts, seed, se_step, verify_width_se, models, lower_frac, upper_frac,
/// rounding (floor|ceil|nearest), oos_ic_n (oos|in), n_perm, format.
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

RoundingRule parse_rounding(const std::string& name);

struct FitOutcome {
  ModelSpec spec;
  std::optional<FittedModel> fit;
  std::string error;
};

struct WorkflowResult {
  SelectionTable table;
  std::vector<FitOutcome> fits;
  std::size_t not_estimable = 0;
  /// tt workflow: the window and the tail counts.
  std::optional<EmpiricalWindow> window;
  /// is/oos workflow: in-sample vs out-of-sample two-sample tests.
  std::optional<TwoSampleResult> split_test;
};

/// Fits each model (smaller nested models first, used as warm starts for
/// the larger ones), collecting failures instead of aborting. `window` is
/// forwarded to tt specs.
std::vector<FitOutcome> fit_battery(std::span<const ModelSpec> models, std::span<const double> x,
                                    const std::optional<TruncationWindow>& window,
                                    const FitConfig& cfg);

WorkflowResult run_full_workflow(const Dataset& ds, std::span<const ModelSpec> models,
                                 const RunConfig& cfg);

/// Fits on the 75% in-sample part; logliks, GoF and ICs are those of the
/// out-of-sample part at the in-sample estimates.
WorkflowResult run_is_oos_workflow(const Dataset& ds, std::span<const ModelSpec> models,
                                   const RunConfig& cfg);

/// tt models on the survivors of the empirical window; `window_override`
/// replaces the empirical window (e.g. the identity window).
WorkflowResult run_tt_workflow(const Dataset& ds, std::span<const ModelSpec> models,
                               const RunConfig& cfg,
                               const std::optional<TruncationWindow>& window_override = std::nullopt);

}  // namespace compdist
