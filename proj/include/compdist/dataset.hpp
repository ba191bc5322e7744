#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace compdist {

/// A labelled sample of positive sizes, kept sorted ascending.
struct Dataset {
  std::string label;
  std::vector<double> values;

  /// Validates (nonempty, all > 0 and finite) and sorts.
  static Dataset from_values(std::string label, std::vector<double> values);
  std::size_t size() const { return values.size(); }
};

struct IngestResult {
  Dataset dataset;
  /// Rows dropped as non-numeric or non-positive (a header is not counted).
  std::size_t dropped = 0;
};

/// Reads one numeric column (0-based) of a delimited file. A first line
/// whose field does not parse as a number is taken as a header. Throws
/// IoError when the file cannot be read and EmptyAfterCleaning when no
/// positive value survives. The label defaults to the file stem.
IngestResult ingest_csv(const std::filesystem::path& path, std::size_t column = 0,
                        char delimiter = ',', std::string label = {});

/// As above, selecting the column by its header name.
IngestResult ingest_csv(const std::filesystem::path& path, const std::string& column_name,
                        char delimiter = ',', std::string label = {});

/// One value per line under a "value" header, 17 significant digits, so
/// write_csv followed by ingest_csv reproduces the values bitwise.
void write_csv(const std::filesystem::path& path, const std::vector<double>& values);

/// Writes `text` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

struct DescriptiveStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double mean_log = 0.0;
  double sd_log = 0.0;
  double skew_log = 0.0;
  /// Non-excess: 3 for normal ln-data.
  double kurt_log = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Population moments of x and ln x; skewness m3 / m2^1.5 and kurtosis
/// m4 / m2^2. Requires n >= 4 and non-constant data.
DescriptiveStats describe(const Dataset& ds);

/// Uniform random partition: ceil(0.75 n) in-sample values, the rest
/// out-of-sample. Requires n >= 8.
std::pair<Dataset, Dataset> split_75_25(const Dataset& ds, std::uint64_t seed);

}  // namespace compdist
