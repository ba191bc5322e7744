#include "compdist/selection.hpp"

#include <cmath>
#include <stdexcept>

namespace compdist {

double aic(double loglik, int k) { return 2.0 * k - 2.0 * loglik; }

double bic(double loglik, int k, double n) { return k * std::log(n) - 2.0 * loglik; }

double hqc(double loglik, int k, double n) {
  if (!(n > std::exp(1.0))) throw std::domain_error("hqc: n must exceed e");
  return 2.0 * k * std::log(std::log(n)) - 2.0 * loglik;
}

std::string_view criterion_name(Criterion c) {
  switch (c) {
    case Criterion::kKS: return "KS";
    case Criterion::kCM: return "CM";
    case Criterion::kAD: return "AD";
    case Criterion::kAIC: return "AIC";
    case Criterion::kBIC: return "BIC";
    case Criterion::kHQC: return "HQC";
  }
  return "?";
}

double SelectionRow::value(Criterion c) const {
  switch (c) {
    case Criterion::kKS: return ks;
    case Criterion::kCM: return cm;
    case Criterion::kAD: return ad;
    case Criterion::kAIC: return aic;
    case Criterion::kBIC: return bic;
    case Criterion::kHQC: return hqc;
  }
  return 0.0;
}

SelectionRow make_row(const ModelSpec& spec, double loglik, std::size_t n, double ks, double cm,
                      double ad) {
  SelectionRow row;
  row.spec = spec;
  row.k = spec.k();
  row.estimable = true;
  row.n = n;
  row.loglik = loglik;
  row.aic = compdist::aic(loglik, row.k);
  row.bic = compdist::bic(loglik, row.k, static_cast<double>(n));
  row.hqc = compdist::hqc(loglik, row.k, static_cast<double>(n));
  row.ks = ks;
  row.cm = cm;
  row.ad = ad;
  return row;
}

SelectionRow blank_row(const ModelSpec& spec, std::string note) {
  SelectionRow row;
  row.spec = spec;
  row.k = spec.k();
  row.note = std::move(note);
  const double nan = std::nan("");
  row.loglik = row.aic = row.bic = row.hqc = row.ks = row.cm = row.ad = nan;
  return row;
}

void assign_flags(SelectionTable& table) {
  for (std::size_t c = 0; c < kCriteria.size(); ++c) {
    SelectionRow* best = nullptr;
    for (auto& row : table.rows) {
      row.flags[c] = false;
      const double v = row.value(kCriteria[c]);
      if (!row.estimable || std::isnan(v)) continue;
      if (!best) {
        best = &row;
        continue;
      }
      const double b = best->value(kCriteria[c]);
      if (v < b || (v == b && (row.k < best->k ||
                               (row.k == best->k && row.spec.name() < best->spec.name())))) {
        best = &row;
      }
    }
    if (best) best->flags[c] = true;
  }
}

CountMatrix summarize_counts(std::span<const SelectionTable> tables) {
  if (tables.empty()) throw std::invalid_argument("summarize_counts: no tables");
  CountMatrix m;
  m.n_tables = static_cast<int>(tables.size());
  for (const auto& t : tables) {
    for (const auto& row : t.rows) {
      const std::string name = row.spec.name();
      std::size_t i = 0;
      while (i < m.models.size() && m.models[i] != name) ++i;
      if (i == m.models.size()) {
        m.models.push_back(name);
        m.k.push_back(row.k);
        m.counts.push_back({});
      }
      for (std::size_t c = 0; c < kCriteria.size(); ++c) {
        if (row.flags[c]) {
          ++m.counts[i][c];
          ++m.total[c];
        }
      }
    }
  }
  return m;
}

}  // namespace compdist
