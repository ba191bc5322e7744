// compdist: fit size-distribution models, run the full / split / truncated
// selection batteries, sample from models and evaluate Fokker-Planck drifts.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "compdist/dataset.hpp"
#include "compdist/errors.hpp"
#include "compdist/estimation.hpp"
#include "compdist/fokker_planck.hpp"
#include "compdist/gof.hpp"
#include "compdist/reports.hpp"
#include "compdist/sampling.hpp"
#include "compdist/workflows.hpp"

namespace fs = std::filesystem;
using namespace compdist;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

struct Common {
  std::vector<std::string> inputs;
  std::string column = "0";
  std::string config;
  std::string models;
  std::uint64_t seed = 0;
  int starts = 0;
  double lower_frac = -1.0;
  double upper_frac = -1.0;
  std::string out;
  std::string format;
};

RunConfig resolve_config(const Common& c) {
  RunConfig cfg;
  if (!c.config.empty()) cfg = load_run_config(c.config);
  if (!c.models.empty()) cfg.models = c.models;
  if (c.seed != 0) cfg.fit.seed = c.seed;
  if (c.starts > 0) cfg.fit.n_starts = c.starts;
  if (c.lower_frac >= 0.0) cfg.lower_frac = c.lower_frac;
  if (c.upper_frac >= 0.0) cfg.upper_frac = c.upper_frac;
  if (!c.format.empty()) cfg.format = c.format;
  return cfg;
}

Dataset load(const std::string& path, const std::string& column) {
  const bool numeric = !column.empty() && column.find_first_not_of("0123456789") == std::string::npos;
  IngestResult r = numeric ? ingest_csv(path, static_cast<std::size_t>(std::stoul(column)))
                           : ingest_csv(path, column);
  if (r.dropped > 0) {
    std::cerr << "warning: " << path << ": dropped " << r.dropped
              << " non-numeric or non-positive rows\n";
  }
  return std::move(r.dataset);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stod(item));
  return out;
}

void add_common(CLI::App* cmd, Common& c, bool many_inputs) {
  if (many_inputs) {
    cmd->add_option("inputs", c.inputs, "CSV files, one sample each")->required()->check(CLI::ExistingFile);
  } else {
    cmd->add_option("input", c.inputs, "CSV file")->required()->expected(1)->check(CLI::ExistingFile);
  }
  cmd->add_option("--column", c.column, "column index (0-based) or header name");
  cmd->add_option("--config", c.config, "key = value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--models", c.models, "comma-separated model names or 'all'");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--starts", c.starts, "optimizer starts per model");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--format", c.format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
}

void add_fracs(CLI::App* cmd, Common& c) {
  cmd->add_option("--lower-frac", c.lower_frac, "fraction dropped from the bottom (default 0.10)");
  cmd->add_option("--upper-frac", c.upper_frac, "fraction dropped from the top (default 0.001)");
}

void print_table(const SelectionTable& t) {
  std::printf("%s\n%-9s %3s %16s %16s %16s %16s %10s %12s %12s  %s\n", t.sample_id.c_str(), "model",
              "k", "loglik", "AIC", "BIC", "HQC", "KS", "CM", "AD", "argmin");
  for (const auto& r : t.rows) {
    if (!r.estimable) {
      std::printf("%-9s %3d  not estimable: %s\n", r.spec.name().c_str(), r.k, r.note.c_str());
      continue;
    }
    std::string flags;
    for (std::size_t c = 0; c < kCriteria.size(); ++c) {
      if (r.flags[c]) flags += std::string(flags.empty() ? "" : ",") + std::string(criterion_name(kCriteria[c]));
    }
    std::printf("%-9s %3d %16.4f %16.4f %16.4f %16.4f %10.6f %12.6f %12.6f  %s\n",
                r.spec.name().c_str(), r.k, r.loglik, r.aic, r.bic, r.hqc, r.ks, r.cm, r.ad,
                flags.c_str());
  }
}

enum class Workflow { kFull, kSplit, kTruncated };

int run_battery(const Common& c, Workflow which) {
  const RunConfig cfg = resolve_config(c);
  const auto models = parse_model_list(cfg.models);
  std::vector<SelectionTable> tables;
  std::size_t missing = 0;
  for (const auto& path : c.inputs) {
    const Dataset ds = load(path, c.column);
    WorkflowResult r;
    switch (which) {
      case Workflow::kFull: r = run_full_workflow(ds, models, cfg); break;
      case Workflow::kSplit: r = run_is_oos_workflow(ds, models, cfg); break;
      case Workflow::kTruncated: r = run_tt_workflow(ds, models, cfg); break;
    }
    print_table(r.table);
    if (r.window) {
      std::printf("window [%.17g, %.17g]: %zu -> %zu (dropped %zu low, %zu high)\n",
                  r.window->window.a(), r.window->window.b(), ds.size(), r.window->survivors.size(),
                  r.window->dropped_low, r.window->dropped_high);
    }
    if (r.split_test) {
      std::printf("in vs out of sample: KS p=%.4f CM p=%.4f AD p=%.4f\n", r.split_test->p_ks,
                  r.split_test->p_cm, r.split_test->p_ad);
    }
    std::printf("\n");
    missing += r.not_estimable;
    tables.push_back(std::move(r.table));
  }
  if (!c.out.empty()) {
    for (const auto& p : emit_reports(tables, c.out, parse_report_format(cfg.format))) {
      std::cerr << "wrote " << p.string() << "\n";
    }
  }
  return missing > 0 ? kExitPartial : kExitOk;
}

int run_fit(const Common& c, bool truncated) {
  const RunConfig cfg = resolve_config(c);
  const Dataset ds = load(c.inputs.front(), c.column);
  const auto models = parse_model_list(cfg.models, truncated);
  std::optional<EmpiricalWindow> ew;
  if (truncated) ew = empirical_window(ds.values, cfg.lower_frac, cfg.upper_frac, cfg.rounding);
  const auto& x = ew ? ew->survivors : ds.values;
  const auto outcomes = fit_battery(models, x, ew ? std::optional(ew->window) : std::nullopt, cfg.fit);
  nlohmann::json fits = nlohmann::json::array();
  std::size_t missing = 0;
  for (const auto& o : outcomes) {
    if (!o.fit) {
      ++missing;
      std::printf("%s: not estimable (%s)\n", o.spec.name().c_str(), o.error.c_str());
      continue;
    }
    const auto& f = *o.fit;
    std::printf("%s  loglik %.6f  n %zu  starts agreeing %d%s\n", f.spec.name().c_str(), f.loglik,
                f.n, f.starts_agreeing, f.singular_information ? "  (singular information)" : "");
    const auto names = param_names(f.spec);
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::printf("  %-7s %14.8g  (SE %.3g)\n", names[i].c_str(), f.params[i], f.std_errors[i]);
    }
    fits.push_back(fit_json(f));
  }
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    const nlohmann::json doc = {{"schema", kReportSchema}, {"sample_id", ds.label}, {"fits", fits}};
    write_file_atomic(fs::path(c.out) / (ds.label + "_fits.json"), dump_json(doc));
  }
  return missing > 0 ? kExitPartial : kExitOk;
}

int run_describe(const Common& c) {
  std::vector<std::string> labels;
  std::vector<DescriptiveStats> stats;
  for (const auto& path : c.inputs) {
    const Dataset ds = load(path, c.column);
    labels.push_back(ds.label);
    stats.push_back(describe(ds));
  }
  const std::string text = describe_csv(labels, stats);
  if (c.out.empty()) {
    std::cout << text;
  } else {
    fs::create_directories(c.out);
    write_file_atomic(fs::path(c.out) / "describe.csv", text);
  }
  return kExitOk;
}

struct SampleArgs {
  std::string model;
  std::string params;
  std::string window;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

int run_sample(const SampleArgs& a) {
  const ModelSpec spec = ModelSpec::parse(a.model);
  const auto params = parse_list(a.params);
  std::vector<double> x;
  if (spec.truncated || !a.window.empty()) {
    const auto ab = parse_list(a.window);
    if (ab.size() != 2) throw std::invalid_argument("--window needs a,b");
    x = sample_truncated(spec, params, TruncationWindow(ab[0], ab[1]), a.n, {a.seed, 0});
  } else {
    x = sample(spec, params, a.n, {a.seed, 0});
  }
  if (a.out.empty()) {
    for (double v : x) std::printf("%.17g\n", v);
  } else {
    write_csv(a.out, x);
  }
  return kExitOk;
}

struct FpArgs {
  std::string path;
  std::string out;
  double y_lo = NAN;
  double y_hi = NAN;
  int ny = 41;
  int nt = 5;
  double h = 1e-3;
  std::size_t n = 100000;
  std::size_t steps = 2000;
  std::uint64_t seed = 1;
};

DriftField load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return drift_field_from_json(nlohmann::json::parse(in));
}

int run_fp_drift(const FpArgs& a) {
  const DriftField field = load_field(a.path);
  const auto& path = field.path;
  double lo = a.y_lo, hi = a.y_hi;
  if (std::isnan(lo) || std::isnan(hi)) {
    const PathState st = path.at(path.t0());
    if (st.truncated) {
      lo = st.y_min + 0.05 * (st.y_max - st.y_min);
      hi = st.y_max - 0.05 * (st.y_max - st.y_min);
    } else {
      lo = *std::min_element(st.mu.begin(), st.mu.end()) - 3.0 * *std::max_element(st.sigma.begin(), st.sigma.end());
      hi = *std::max_element(st.mu.begin(), st.mu.end()) + 3.0 * *std::max_element(st.sigma.begin(), st.sigma.end());
    }
  }
  std::string text = "y,t,f,cdf,b,residual\n";
  char buf[160];
  for (int j = 0; j < a.nt; ++j) {
    const double t = path.t0() + (path.t1() - path.t0()) * (a.nt == 1 ? 0.0 : j / (a.nt - 1.0));
    const PathState st = path.at(t);
    for (int i = 0; i < a.ny; ++i) {
      const double y = lo + (hi - lo) * (a.ny == 1 ? 0.0 : i / (a.ny - 1.0));
      if (st.truncated && (y < st.y_min || y > st.y_max)) continue;
      const double tt = std::clamp(t, path.t0() + a.h, path.t1() - a.h);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.6g\n", y, t, path_pdf(st, y),
                    path_cdf(st, y), drift(field, st, y), fp_residual_at(field, y, tt, a.h, a.h));
      text += buf;
    }
  }
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(a.out, text);
  }
  return kExitOk;
}

int run_fp_simulate(const FpArgs& a) {
  const DriftField field = load_field(a.path);
  const auto& path = field.path;
  const RngStream stream{a.seed, 0};
  auto y0 = sample_path_y(path, path.t0(), a.n, stream.substream(1));
  SdeOptions opt;
  opt.n_steps = a.steps;
  auto y1 = simulate_sde(field, std::move(y0), path.t0(), path.t1(), opt, stream.substream(2));
  std::sort(y1.begin(), y1.end());
  const PathState end = path.at(path.t1());
  const double ks = ks_stat(cdf_values(y1, [&](double y) { return path_cdf(end, y); }));
  std::fprintf(stderr, "KS vs f(., t1) = %.6f (1%% critical value %.6f)\n", ks,
               1.6276 / std::sqrt(static_cast<double>(y1.size())));
  std::string text = "y\n";
  char buf[40];
  for (double v : y1) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    text += buf;
  }
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(a.out, text);
  }
  return kExitOk;
}

int run_report(const std::string& dir, const std::string& out, const std::string& format) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.size() > 11 && name.ends_with("_table.json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no *_table.json files in " + dir);
  std::vector<SelectionTable> tables;
  for (const auto& f : files) {
    std::ifstream in(f);
    tables.push_back(table_from_json(nlohmann::json::parse(in)));
  }
  const auto counts = summarize_counts(tables);
  std::cout << counts_csv(counts);
  const fs::path target = out.empty() ? fs::path(dir) : fs::path(out);
  fs::create_directories(target);
  const auto fmt = parse_report_format(format.empty() ? "both" : format);
  if (fmt != ReportFormat::kJson) write_file_atomic(target / "summary_counts.csv", counts_csv(counts));
  if (fmt != ReportFormat::kCsv) write_file_atomic(target / "summary_counts.json", dump_json(counts_json(counts)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite size-distribution fitting and model selection"};
  app.require_subcommand(1);

  Common fit_c, desc_c, full_c, split_c, tt_c;
  bool fit_truncated = false;
  auto* fit = app.add_subcommand("fit", "fit models to one sample and print estimates");
  add_common(fit, fit_c, false);
  add_fracs(fit, fit_c);
  fit->add_flag("--tt", fit_truncated, "fit doubly truncated models on the empirical window");

  auto* desc = app.add_subcommand("describe", "descriptive statistics (describe.csv)");
  add_common(desc, desc_c, true);

  auto* full = app.add_subcommand("full", "full-sample selection battery");
  add_common(full, full_c, true);

  auto* split = app.add_subcommand("split-eval", "75/25 in-sample / out-of-sample battery");
  add_common(split, split_c, true);

  auto* tt = app.add_subcommand("tt", "doubly truncated battery");
  add_common(tt, tt_c, true);
  add_fracs(tt, tt_c);

  SampleArgs sa;
  auto* samp = app.add_subcommand("sample", "draw from a model");
  samp->add_option("--model", sa.model, "model name, e.g. 2LN")->required();
  samp->add_option("--params", sa.params, "comma-separated natural parameters")->required();
  samp->add_option("--window", sa.window, "truncation window a,b");
  samp->add_option("--n", sa.n, "number of draws");
  samp->add_option("--seed", sa.seed, "random seed");
  samp->add_option("--out", sa.out, "output CSV (stdout when omitted)");

  FpArgs fd, fsim;
  auto* fpd = app.add_subcommand("fp-drift", "drift, density and PDE residual on a (y, t) grid");
  fpd->add_option("--path", fd.path, "parameter path JSON")->required()->check(CLI::ExistingFile);
  fpd->add_option("--y-min", fd.y_lo, "grid start");
  fpd->add_option("--y-max", fd.y_hi, "grid end");
  fpd->add_option("--ny", fd.ny, "grid points in y");
  fpd->add_option("--nt", fd.nt, "grid points in t");
  fpd->add_option("--step", fd.h, "finite-difference step of the residual");
  fpd->add_option("--out", fd.out, "output CSV");

  auto* fps = app.add_subcommand("fp-simulate", "Euler-Maruyama ensemble from f(., t0) to t1");
  fps->add_option("--path", fsim.path, "parameter path JSON")->required()->check(CLI::ExistingFile);
  fps->add_option("--n", fsim.n, "trajectories");
  fps->add_option("--steps", fsim.steps, "time steps");
  fps->add_option("--seed", fsim.seed, "random seed");
  fps->add_option("--out", fsim.out, "output CSV of the ensemble at t1");

  std::string report_dir, report_out, report_format;
  auto* rep = app.add_subcommand("report", "summary counts from a directory of *_table.json");
  rep->add_option("dir", report_dir, "directory with per-sample tables")->required()->check(CLI::ExistingDirectory);
  rep->add_option("--out", report_out, "output directory (defaults to dir)");
  rep->add_option("--format", report_format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit) return run_fit(fit_c, fit_truncated);
    if (*desc) return run_describe(desc_c);
    if (*full) return run_battery(full_c, Workflow::kFull);
    if (*split) return run_battery(split_c, Workflow::kSplit);
    if (*tt) return run_battery(tt_c, Workflow::kTruncated);
    if (*samp) return run_sample(sa);
    if (*fpd) return run_fp_drift(fd);
    if (*fps) return run_fp_simulate(fsim);
    if (*rep) return run_report(report_dir, report_out, report_format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}
