#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ocwc/obool/backend.hpp"
#include "ocwc/protocol.hpp"

namespace ocwc::bench {

using protocol::Algorithm;
using protocol::BackendKind;

struct BenchConfig {
  std::vector<std::size_t> ks{4, 8, 16, 32};
  std::vector<std::size_t> ns{8, 16, 32};
  std::vector<Algorithm> algorithms{Algorithm::Naive, Algorithm::Improved};
  BackendKind backend = BackendKind::Sim;
  std::uint64_t seed = 1;
  obool::CostTable cost;
  std::size_t memory_budget_mb = 0;  // 0 = unlimited
  std::string adapter_path;
};

struct BenchCell {
  Algorithm algorithm = Algorithm::Improved;
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t n_pad = 0;
  std::uint64_t dataset_seed = 0;
  bool skipped = false;
  std::string reason;
  obool::GateCounts gates;
  double cost = 0;
  double wall_ms = 0;
  std::string digest;
  std::string mask;  // decrypted keep-mask, '0'/'1' per feature
};

/// count(2k) / count(k) at fixed n.
struct KDoubling {
  Algorithm algorithm;
  std::size_t n, k_from, k_to;
  double ratio;
};

struct NaiveOverImproved {
  std::size_t k, n;
  double ratio;
};

/// Best single constant `a` for count ~ a * model(k, n), and the worst
/// multiplicative deviation of any cell from it.
struct ScalingFit {
  Algorithm algorithm;
  std::string model;
  double a = 0;
  double max_factor = 0;
  std::size_t cells = 0;
};

/// Analytic gate estimate for an O(k n^2 log n) pairwise-label baseline;
/// informational only, never executed.
struct PairwiseModelPoint {
  std::size_t k, n;
  double gates;
  double over_improved;  // 0 when the improved cell is missing
};

struct Diagnostics {
  std::vector<KDoubling> k_doubling;
  std::vector<NaiveOverImproved> naive_over_improved;
  std::vector<ScalingFit> fits;
  std::vector<PairwiseModelPoint> pairwise_model;
};

struct BenchReport {
  BenchConfig config;
  std::string timestamp;
  std::vector<BenchCell> cells;
  Diagnostics diagnostics;

  const BenchCell* find(Algorithm algorithm, std::size_t k, std::size_t n) const;
};

/// Runs one cell on a fresh backend. Cells that exceed the memory budget are
/// returned with skipped = true.
BenchCell run_cell(const BenchConfig& config, Algorithm algorithm, std::size_t k, std::size_t n);

Diagnostics diagnose(const std::vector<BenchCell>& cells);

/// Throws UsageError on an empty grid or a non-positive dimension.
BenchReport run_bench(const BenchConfig& config);

/// One JSON object per line: a meta record, one record per cell, then the
/// diagnostics record. Validated by schemas/bench_report.schema.json.
std::string to_jsonl(const BenchReport& report);

/// Tab-separated table with one row per cell (algorithm, k, n, counts, cost,
/// wall time), directly plottable against either axis.
std::string to_table(const BenchReport& report);

double pairwise_model_gates(std::size_t k, std::size_t n);

}  // namespace ocwc::bench
