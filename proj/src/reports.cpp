#include "compdist/reports.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "compdist/errors.hpp"

namespace compdist {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json num_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double json_num(const nlohmann::json& v) {
  return v.is_null() ? std::nan("") : v.get<double>();
}

std::string flags_text(const SelectionRow& row) {
  std::string out;
  for (std::size_t c = 0; c < kCriteria.size(); ++c) {
    if (!row.flags[c]) continue;
    if (!out.empty()) out += '|';
    out += criterion_name(kCriteria[c]);
  }
  return out;
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "both") return ReportFormat::kBoth;
  throw std::invalid_argument("format must be csv, json or both");
}

std::string table_csv(const SelectionTable& table) {
  std::string out = "model,k,loglik,aic,bic,hqc,ks,cm,ad,flags\n";
  for (const auto& r : table.rows) {
    out += r.spec.name() + "," + std::to_string(r.k);
    for (double v : {r.loglik, r.aic, r.bic, r.hqc, r.ks, r.cm, r.ad}) {
      out += "," + (r.estimable ? num(v) : std::string());
    }
    out += "," + flags_text(r) + "\n";
  }
  return out;
}

nlohmann::json table_json(const SelectionTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json flags = nlohmann::json::array();
    for (std::size_t c = 0; c < kCriteria.size(); ++c) {
      if (r.flags[c]) flags.push_back(std::string(criterion_name(kCriteria[c])));
    }
    rows.push_back({{"model", r.spec.name()},
                    {"k", r.k},
                    {"estimable", r.estimable},
                    {"n", r.n},
                    {"loglik", num_json(r.loglik)},
                    {"aic", num_json(r.aic)},
                    {"bic", num_json(r.bic)},
                    {"hqc", num_json(r.hqc)},
                    {"ks", num_json(r.ks)},
                    {"cm", num_json(r.cm)},
                    {"ad", num_json(r.ad)},
                    {"flags", flags},
                    {"note", r.note}});
  }
  return {{"schema", kReportSchema}, {"sample_id", table.sample_id}, {"rows", rows}};
}

SelectionTable table_from_json(const nlohmann::json& doc) {
  if (doc.value("schema", "") != kReportSchema) throw std::invalid_argument("unknown report schema");
  SelectionTable t;
  t.sample_id = doc.at("sample_id").get<std::string>();
  for (const auto& jr : doc.at("rows")) {
    SelectionRow r;
    r.spec = ModelSpec::parse(jr.at("model").get<std::string>());
    r.k = jr.at("k").get<int>();
    r.estimable = jr.at("estimable").get<bool>();
    r.n = jr.at("n").get<std::size_t>();
    r.loglik = json_num(jr.at("loglik"));
    r.aic = json_num(jr.at("aic"));
    r.bic = json_num(jr.at("bic"));
    r.hqc = json_num(jr.at("hqc"));
    r.ks = json_num(jr.at("ks"));
    r.cm = json_num(jr.at("cm"));
    r.ad = json_num(jr.at("ad"));
    for (const auto& f : jr.at("flags")) {
      for (std::size_t c = 0; c < kCriteria.size(); ++c) {
        if (f.get<std::string>() == criterion_name(kCriteria[c])) r.flags[c] = true;
      }
    }
    r.note = jr.value("note", "");
    t.rows.push_back(std::move(r));
  }
  return t;
}

std::string counts_csv(const CountMatrix& m) {
  std::string out = "model,k";
  for (auto c : kCriteria) out += "," + std::string(criterion_name(c));
  out += "\n";
  for (std::size_t i = 0; i < m.models.size(); ++i) {
    out += m.models[i] + "," + std::to_string(m.k[i]);
    for (int v : m.counts[i]) out += "," + std::to_string(v);
    out += "\n";
  }
  out += "Total,";
  for (int v : m.total) out += "," + std::to_string(v);
  out += "\n";
  return out;
}

nlohmann::json counts_json(const CountMatrix& m) {
  auto by_criterion = [](const std::array<int, 6>& v) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t c = 0; c < kCriteria.size(); ++c) j[std::string(criterion_name(kCriteria[c]))] = v[c];
    return j;
  };
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.models.size(); ++i) {
    rows.push_back({{"model", m.models[i]}, {"k", m.k[i]}, {"counts", by_criterion(m.counts[i])}});
  }
  return {{"schema", kReportSchema},
          {"n_tables", m.n_tables},
          {"rows", rows},
          {"total", by_criterion(m.total)}};
}

std::string describe_csv(std::span<const std::string> labels,
                         std::span<const DescriptiveStats> stats) {
  if (labels.size() != stats.size()) throw std::invalid_argument("describe_csv: size mismatch");
  std::string out = "sample,n,mean,sd,mean_log,sd_log,skew_log,kurt_log,min,max\n";
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto& s = stats[i];
    out += labels[i] + "," + std::to_string(s.n);
    for (double v : {s.mean, s.sd, s.mean_log, s.sd_log, s.skew_log, s.kurt_log, s.min, s.max}) {
      out += "," + num(v);
    }
    out += "\n";
  }
  return out;
}

nlohmann::json fit_json(const FittedModel& fit) {
  const auto names = param_names(fit.spec);
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json ses = nlohmann::json::object();
  for (std::size_t i = 0; i < names.size(); ++i) {
    params[names[i]] = fit.params[i];
    ses[names[i]] = num_json(i < fit.std_errors.size() ? fit.std_errors[i] : std::nan(""));
  }
  nlohmann::json j = {{"model", fit.spec.name()},
                      {"k", fit.k()},
                      {"n", fit.n},
                      {"loglik", fit.loglik},
                      {"params", params},
                      {"std_errors", ses},
                      {"converged", fit.converged},
                      {"starts_agreeing", fit.starts_agreeing},
                      {"singular_information", fit.singular_information}};
  if (fit.window) j["window"] = {fit.window->a(), fit.window->b()};
  return j;
}

DriftField drift_field_from_json(const nlohmann::json& doc) {
  const ModelSpec spec = ModelSpec::parse(doc.at("model").get<std::string>());
  auto window = [&](const char* key) -> std::optional<TruncationWindow> {
    if (!doc.contains(key)) return std::nullopt;
    const auto ab = doc.at(key).get<std::vector<double>>();
    if (ab.size() != 2) throw std::invalid_argument(std::string(key) + " must be [a, b]");
    return TruncationWindow(ab[0], ab[1]);
  };
  ParamPath path(spec, doc.value("t0", 0.0), doc.value("t1", 1.0),
                 doc.at("params_t0").get<std::vector<double>>(),
                 doc.contains("params_t1") ? doc.at("params_t1").get<std::vector<double>>()
                                           : doc.at("params_t0").get<std::vector<double>>(),
                 window("window_t0"), window("window_t1"));
  DriftKind kind = DriftKind::kGeneric;
  const std::string mode = doc.value("drift", "closed");
  if (mode == "closed") {
    if (spec.id == ModelId::k4LSt && !spec.truncated) kind = DriftKind::kFourLSt;
    if (spec.id == ModelId::k5LSt && spec.truncated) kind = DriftKind::kFiveLStTT;
  } else if (mode != "generic") {
    throw std::invalid_argument("drift must be closed or generic");
  }
  return DriftField(doc.value("s", 1.0), std::move(path), kind);
}

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

std::vector<std::filesystem::path> emit_reports(std::span<const SelectionTable> tables,
                                                const std::filesystem::path& dir,
                                                ReportFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const bool csv = format != ReportFormat::kJson;
  const bool json = format != ReportFormat::kCsv;
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& text) {
    written.push_back(dir / name);
    write_file_atomic(written.back(), text);
  };
  for (const auto& t : tables) {
    if (csv) put(t.sample_id + "_table.csv", table_csv(t));
    if (json) put(t.sample_id + "_table.json", dump_json(table_json(t)));
  }
  if (!tables.empty()) {
    const auto counts = summarize_counts(tables);
    if (csv) put("summary_counts.csv", counts_csv(counts));
    if (json) put("summary_counts.json", dump_json(counts_json(counts)));
  }
  return written;
}

}  // namespace compdist
