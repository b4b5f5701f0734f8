#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "geoc/series.hpp"

namespace geoc {

/// A 1-based column index or a header name.
using ColumnSelector = std::variant<std::size_t, std::string>;

/// "3" selects the third column; anything else is a header name.
ColumnSelector parse_column_selector(const std::string& text);
std::string to_string(const ColumnSelector& c);

struct CsvOptions {
  bool header = false;
  std::size_t min_rows = 100;
};

/// Reads two aligned numeric columns. Accepts LF or CRLF line ends and a UTF-8
/// byte-order mark. Throws SchemaError for unknown or out-of-range columns,
/// ParseError listing every row whose selected fields are not numeric, and
/// InsufficientDataError below min_rows.
std::pair<TimeSeries, TimeSeries> ingest_csv(const std::filesystem::path& path,
                                             const ColumnSelector& x, const ColumnSelector& y,
                                             const CsvOptions& options = {});

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Writes equal-length columns under a header row.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Rendering of an infinite result.
inline constexpr const char* kDivergentText = "divergent (noiseless limit)";

struct Curve {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

/// Key-value report in five sections plus one CSV per curve.
class AnalysisReport {
 public:
  using Entries = std::vector<std::pair<std::string, std::string>>;

  void input(const std::string& key, const std::string& value);
  void param(const std::string& key, const std::string& value);
  void param(const std::string& key, double value);
  /// Finite values or +-infinity (rendered as kDivergentText); NaN throws.
  void result(const std::string& key, double value);
  void diagnostic(const std::string& key, const std::string& value);
  void warning(const std::string& text);
  void curve(Curve c);

  const Entries& inputs() const noexcept { return inputs_; }
  const Entries& params() const noexcept { return params_; }
  const Entries& results() const noexcept { return results_; }
  const Entries& diagnostics() const noexcept { return diagnostics_; }
  const std::vector<Curve>& curves() const noexcept { return curves_; }

  std::string text() const;
  /// Writes <stem>.report.txt and <stem>.<curve>.csv next to it; returns the
  /// paths written.
  std::vector<std::filesystem::path> write(const std::filesystem::path& stem) const;

 private:
  Entries inputs_;
  Entries params_;
  Entries results_;
  Entries diagnostics_;
  std::vector<Curve> curves_;
  std::size_t warnings_ = 0;
};

inline constexpr const char* kArtifactVersion = "geoflow 0.1.0";
inline constexpr const char* kReportFormat = "1";

}  // namespace geoc
