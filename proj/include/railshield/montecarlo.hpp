#pragma once

/**
 * @file montecarlo.hpp
 * @brief Fixed-n batches of seeded runs and the shield x certificate matrix.
 */

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "railshield/config.hpp"
#include "railshield/simengine.hpp"

namespace railshield {

struct CellReport {
  bool shield = false;
  CertMode cert = CertMode::Off;
  int runs = 0;      ///< completed (non-aborted) runs
  int aborted = 0;
  double mean_distance = 0.0;
  double reached_end_fraction = 0.0;
  double safe_fraction = 0.0;
  double safe_lo = 0.0;
  double safe_hi = 0.0;
  std::int64_t false_det_activated = 0;
  std::int64_t correct_det_activated = 0;
  std::int64_t rejected_true = 0;
  std::int64_t rejected_false = 0;
  std::int64_t steps = 0;

  bool operator==(const CellReport&) const = default;
};

struct AggregateReport {
  int n = 0;
  std::uint64_t base_seed = 0;
  std::vector<CellReport> cells;
};

/// Wilson score interval, clamped to [0, 1].
std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t n, double z = 1.96);

/// Seed of run i: the i-th output (0-based) of SplitMix64(base_seed).
std::uint64_t run_seed(std::uint64_t base_seed, int i);

/// Folds per-run results (in run order) into a cell.
CellReport aggregate(const ScenarioConfig& cfg, const std::vector<RunResult>& results);

/// Throws ConfigError if n < 1.
CellReport run_batch(const ScenarioConfig& cfg, int n, std::uint64_t base_seed, int parallelism = 1);

/// shield {off,on} x cert {Off,NoStop,On}, same base seed in every cell.
AggregateReport run_matrix(const ScenarioConfig& cfg, int n, std::uint64_t base_seed, int parallelism = 1);

nlohmann::ordered_json to_json(const AggregateReport& report);
std::string render_table(const AggregateReport& report);

}  // namespace railshield
