#include "geoc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "geoc/error.hpp"

namespace geoc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_number(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::string row_list(const std::vector<std::size_t>& rows) {
  std::ostringstream os;
  const std::size_t shown = std::min<std::size_t>(rows.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) os << (i ? ", " : "") << rows[i];
  if (rows.size() > shown) os << ", ... (" << rows.size() << " rows)";
  return os.str();
}

}  // namespace

ColumnSelector parse_column_selector(const std::string& text) {
  if (!text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
    std::size_t v = 0;
    std::from_chars(text.data(), text.data() + text.size(), v);
    if (v == 0) throw ArgumentError("column indices are 1-based");
    return v;
  }
  if (text.empty()) throw ArgumentError("empty column selector");
  return text;
}

std::string to_string(const ColumnSelector& c) {
  if (const auto* i = std::get_if<std::size_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

std::pair<TimeSeries, TimeSeries> ingest_csv(const std::filesystem::path& path,
                                             const ColumnSelector& x, const ColumnSelector& y,
                                             const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> names;
  std::size_t xi = 0;
  std::size_t yi = 0;
  bool resolved = false;

  auto resolve = [&](const ColumnSelector& sel, std::size_t width) -> std::size_t {
    if (const auto* idx = std::get_if<std::size_t>(&sel)) {
      if (*idx == 0 || *idx > width) {
        throw SchemaError("column " + std::to_string(*idx) + " does not exist (file has " +
                          std::to_string(width) + " columns)");
      }
      return *idx - 1;
    }
    const auto& name = std::get<std::string>(sel);
    if (names.empty()) throw SchemaError("column '" + name + "' selected by name but the file has no header");
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw SchemaError("no column named '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
  };

  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::size_t> bad;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (line_no == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto fields = split(view);
    if (options.header && names.empty() && !resolved) {
      for (auto f : fields) names.emplace_back(f);
      continue;
    }
    if (!resolved) {
      xi = resolve(x, fields.size());
      yi = resolve(y, fields.size());
      resolved = true;
    }
    double a = 0.0;
    double b = 0.0;
    if (xi >= fields.size() || yi >= fields.size() || !parse_number(fields[xi], a) ||
        !parse_number(fields[yi], b)) {
      bad.push_back(line_no);
      continue;
    }
    xs.push_back(a);
    ys.push_back(b);
  }
  if (!resolved && !names.empty()) {
    resolve(x, names.size());
    resolve(y, names.size());
  }
  if (!bad.empty()) {
    throw ParseError("non-numeric values in " + path.string() + " at rows " + row_list(bad), bad);
  }
  if (xs.size() < std::max<std::size_t>(options.min_rows, 2)) {
    throw InsufficientDataError(path.string() + " has " + std::to_string(xs.size()) +
                                " usable rows; at least " +
                                std::to_string(std::max<std::size_t>(options.min_rows, 2)) + " needed");
  }
  const std::string xname = names.empty() ? "x" : names[xi];
  const std::string yname = names.empty() ? "y" : names[yi];
  return {TimeSeries(std::move(xs), xname), TimeSeries(std::move(ys), yname)};
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw ArgumentError("cannot format value");
  return std::string(buf, ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw ArgumentError("header and column counts differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw ArgumentError("csv columns must have equal length");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_double(columns[c][r]);
    out << '\n';
  }
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

void AnalysisReport::input(const std::string& key, const std::string& value) { inputs_.emplace_back(key, value); }
void AnalysisReport::param(const std::string& key, const std::string& value) { params_.emplace_back(key, value); }
void AnalysisReport::param(const std::string& key, double value) { params_.emplace_back(key, format_double(value)); }

void AnalysisReport::result(const std::string& key, double value) {
  if (std::isnan(value)) throw NumericalError("result '" + key + "' is NaN");
  if (std::isinf(value)) {
    results_.emplace_back(key, value > 0 ? kDivergentText : std::string("-") + kDivergentText);
  } else {
    results_.emplace_back(key, format_double(value));
  }
}

void AnalysisReport::diagnostic(const std::string& key, const std::string& value) {
  diagnostics_.emplace_back(key, value);
}

void AnalysisReport::warning(const std::string& text) {
  diagnostics_.emplace_back("warning." + std::to_string(++warnings_), text);
}

void AnalysisReport::curve(Curve c) { curves_.push_back(std::move(c)); }

std::string AnalysisReport::text() const {
  std::ostringstream os;
  auto section = [&](const char* name, const Entries& e) {
    os << '[' << name << "]\n";
    for (const auto& [k, v] : e) os << k << ": " << v << '\n';
    os << '\n';
  };
  section("inputs", inputs_);
  section("params", params_);
  section("results", results_);
  section("diagnostics", diagnostics_);
  section("versions", {{"artifact", kArtifactVersion}, {"report_format", kReportFormat}});
  return os.str();
}

std::vector<std::filesystem::path> AnalysisReport::write(const std::filesystem::path& stem) const {
  std::vector<std::filesystem::path> written;
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  const std::filesystem::path report = stem.string() + ".report.txt";
  std::ofstream out(report, std::ios::binary);
  if (!out) throw DataError("cannot write '" + report.string() + "'");
  out << text();
  if (!out) throw DataError("write failed for '" + report.string() + "'");
  written.push_back(report);
  for (const auto& c : curves_) {
    const std::filesystem::path p = stem.string() + "." + c.name + ".csv";
    write_csv(p, c.header, c.columns);
    written.push_back(p);
  }
  return written;
}

}  // namespace geoc
