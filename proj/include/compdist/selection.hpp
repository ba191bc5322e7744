#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "compdist/model_spec.hpp"

namespace compdist {

double aic(double loglik, int k);
double bic(double loglik, int k, double n);
/// Requires n > e so that ln ln n > 0.
double hqc(double loglik, int k, double n);

enum class Criterion { kKS, kCM, kAD, kAIC, kBIC, kHQC };
inline constexpr std::array<Criterion, 6> kCriteria{Criterion::kKS,  Criterion::kCM,
                                                    Criterion::kAD,  Criterion::kAIC,
                                                    Criterion::kBIC, Criterion::kHQC};
std::string_view criterion_name(Criterion c);

struct SelectionRow {
  ModelSpec spec;
  int k = 0;
  bool estimable = false;
  /// n entering BIC/HQC.
  std::size_t n = 0;
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double hqc = 0.0;
  double ks = 0.0;
  double cm = 0.0;
  double ad = 0.0;
  /// argmin flag per criterion, indexed like kCriteria.
  std::array<bool, 6> flags{};
  /// Why the row is blank, when it is.
  std::string note;

  double value(Criterion c) const;
};

/// Row with loglik/GoF filled in; ICs are derived from (loglik, k, n).
SelectionRow make_row(const ModelSpec& spec, double loglik, std::size_t n, double ks, double cm,
                      double ad);
/// Blank row for a model that could not be estimated.
SelectionRow blank_row(const ModelSpec& spec, std::string note);

struct SelectionTable {
  std::string sample_id;
  std::vector<SelectionRow> rows;
};

/// Sets exactly one argmin flag per criterion among estimable rows. Ties go
/// to the smaller k, then to the lexicographically smaller model name.
void assign_flags(SelectionTable& table);

struct CountMatrix {
  std::vector<std::string> models;
  std::vector<int> k;
  std::vector<std::array<int, 6>> counts;
  std::array<int, 6> total{};
  int n_tables = 0;
};

/// Per-model argmin counts over a battery of tables; rows follow the order
/// in which models first appear.
CountMatrix summarize_counts(std::span<const SelectionTable> tables);

}  // namespace compdist
