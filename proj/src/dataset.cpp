#include "compdist/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "compdist/errors.hpp"
#include "compdist/rng.hpp"

namespace compdist {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\"'";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!trim(line).empty()) lines.push_back(std::move(line));
  }
  if (in.bad()) throw IoError("error reading " + path.string());
  return lines;
}

IngestResult ingest_lines(const std::vector<std::string>& lines, std::size_t first,
                          std::size_t column, char delimiter, std::string label) {
  IngestResult result;
  std::vector<double> values;
  values.reserve(lines.size());
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i], delimiter);
    double v = 0.0;
    const bool numeric = column < fields.size() && parse_double(fields[column], v);
    if (i == 0 && !numeric) continue;  // header
    if (!numeric || !(v > 0.0) || !std::isfinite(v)) {
      ++result.dropped;
      continue;
    }
    values.push_back(v);
  }
  if (values.empty()) throw EmptyAfterCleaning("no positive numeric values in " + label);
  result.dataset = Dataset::from_values(std::move(label), std::move(values));
  return result;
}

double central(const std::vector<double>& v, double mean, int power) {
  long double s = 0.0L;
  for (double x : v) s += std::pow(static_cast<long double>(x - mean), power);
  return static_cast<double>(s / v.size());
}

}  // namespace

Dataset Dataset::from_values(std::string label, std::vector<double> values) {
  if (values.empty()) throw EmptyAfterCleaning("dataset " + label + " is empty");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("dataset values must be positive and finite");
  }
  std::sort(values.begin(), values.end());
  return {std::move(label), std::move(values)};
}

IngestResult ingest_csv(const std::filesystem::path& path, std::size_t column, char delimiter,
                        std::string label) {
  if (label.empty()) label = path.stem().string();
  return ingest_lines(read_lines(path), 0, column, delimiter, std::move(label));
}

IngestResult ingest_csv(const std::filesystem::path& path, const std::string& column_name,
                        char delimiter, std::string label) {
  if (label.empty()) label = path.stem().string();
  const auto lines = read_lines(path);
  if (lines.empty()) throw EmptyAfterCleaning("empty file " + path.string());
  const auto header = split_fields(lines.front(), delimiter);
  const auto it = std::find(header.begin(), header.end(), column_name);
  if (it == header.end()) throw IoError("no column named " + column_name + " in " + path.string());
  return ingest_lines(lines, 1, static_cast<std::size_t>(it - header.begin()), delimiter,
                      std::move(label));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw IoError("error writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

void write_csv(const std::filesystem::path& path, const std::vector<double>& values) {
  std::string text = "value\n";
  text.reserve(values.size() * 24 + 8);
  char buf[40];
  for (double v : values) {
    const int len = std::snprintf(buf, sizeof buf, "%.17g\n", v);
    text.append(buf, len);
  }
  write_file_atomic(path, text);
}

DescriptiveStats describe(const Dataset& ds) {
  const auto& x = ds.values;
  if (x.size() < 4) throw std::invalid_argument("describe: need at least 4 observations");
  DescriptiveStats s;
  s.n = x.size();
  s.min = *std::min_element(x.begin(), x.end());
  s.max = *std::max_element(x.begin(), x.end());
  std::vector<double> y(x.size());
  std::transform(x.begin(), x.end(), y.begin(), [](double v) { return std::log(v); });
  const double n = static_cast<double>(x.size());
  s.mean = static_cast<double>(std::accumulate(x.begin(), x.end(), 0.0L) / n);
  s.sd = std::sqrt(central(x, s.mean, 2));
  s.mean_log = static_cast<double>(std::accumulate(y.begin(), y.end(), 0.0L) / n);
  const double m2 = central(y, s.mean_log, 2);
  if (!(m2 > 0.0)) throw std::invalid_argument("describe: constant data (zero log-scale SD)");
  s.sd_log = std::sqrt(m2);
  s.skew_log = central(y, s.mean_log, 3) / std::pow(m2, 1.5);
  s.kurt_log = central(y, s.mean_log, 4) / (m2 * m2);
  return s;
}

std::pair<Dataset, Dataset> split_75_25(const Dataset& ds, std::uint64_t seed) {
  const std::size_t n = ds.size();
  if (n < 8) throw std::invalid_argument("split_75_25: need at least 8 observations");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto rng = RngStream{seed, 0x5911}.engine();
  std::shuffle(idx.begin(), idx.end(), rng);
  const std::size_t n_in = (3 * n + 3) / 4;
  std::vector<double> in, out;
  in.reserve(n_in);
  out.reserve(n - n_in);
  for (std::size_t i = 0; i < n; ++i) (i < n_in ? in : out).push_back(ds.values[idx[i]]);
  return {Dataset::from_values(ds.label + "_in", std::move(in)),
          Dataset::from_values(ds.label + "_out", std::move(out))};
}

}  // namespace compdist
