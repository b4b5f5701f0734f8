#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geoc/io.hpp"

namespace geoc {

struct BenchOptions {
  std::size_t n = 0;          // 0 picks each table's default
  std::uint64_t seed = 1;
  std::size_t k = 0;          // 0 picks each table's default
  double eps = 0.0;           // 0 picks each table's default
  // Heart/breathing table only.
  std::optional<std::filesystem::path> input;
  ColumnSelector x_column = std::size_t{1};
  ColumnSelector y_column = std::size_t{2};
  bool header = false;
};

/// Conditional entropies h(X'|X) for g(X) + b m(Y), Y ~ U([1, 2]): the
/// semianalytic oracle, the printed closed forms and a kNN estimate.
AnalysisReport bench_hcond(const BenchOptions& options);

/// GeoC and TE for the Henon map on the uniform square and on the attractor.
AnalysisReport bench_henon(const BenchOptions& options);

/// GeoC, the four dimensions and TE(k = 30) on a heart-rate / breathing file.
AnalysisReport bench_heart(const BenchOptions& options);

/// GeoC and TE against b for x' = x + b y on U([0, 1]).
AnalysisReport bench_bsweep(const BenchOptions& options);

/// TE estimate, closed form and upper bound against eps for x' = x + y + noise.
AnalysisReport bench_epssweep(const BenchOptions& options);

std::vector<std::string> bench_tables();
AnalysisReport run_bench(const std::string& table, const BenchOptions& options);

}  // namespace geoc
