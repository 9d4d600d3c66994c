#include "railshield/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "railshield/errors.hpp"
#include "railshield/rng.hpp"

namespace railshield {

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t n, double z) {
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::clamp(centre - half, 0.0, 1.0), std::clamp(centre + half, 0.0, 1.0)};
}

std::uint64_t run_seed(std::uint64_t base_seed, int i) {
  Rng rng(base_seed);
  std::uint64_t s = rng.next();
  for (int k = 0; k < i; ++k) s = rng.next();
  return s;
}

CellReport aggregate(const ScenarioConfig& cfg, const std::vector<RunResult>& results) {
  CellReport c;
  c.shield = cfg.shield;
  c.cert = cfg.cert;
  std::int64_t distance = 0;
  std::int64_t reached = 0;
  std::int64_t safe = 0;
  for (const auto& r : results) {
    if (r.aborted()) {
      ++c.aborted;
      continue;
    }
    ++c.runs;
    distance += r.distance;
    reached += r.reached_end ? 1 : 0;
    safe += r.safe ? 1 : 0;
    c.false_det_activated += r.counters.false_det_activated;
    c.correct_det_activated += r.counters.correct_det_activated;
    c.rejected_true += r.counters.rejected_true;
    c.rejected_false += r.counters.rejected_false;
    c.steps += r.counters.steps;
  }
  if (c.runs > 0) {
    c.mean_distance = static_cast<double>(distance) / c.runs;
    c.reached_end_fraction = static_cast<double>(reached) / c.runs;
    c.safe_fraction = static_cast<double>(safe) / c.runs;
    std::tie(c.safe_lo, c.safe_hi) = wilson_interval(safe, c.runs);
  } else {
    c.safe_hi = 1.0;
  }
  return c;
}

CellReport run_batch(const ScenarioConfig& cfg, int n, std::uint64_t base_seed, int parallelism) {
  if (n < 1) throw ConfigError("runs: must be >= 1");
  validate(cfg);

  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  Rng seeder(base_seed);
  for (auto& s : seeds) s = seeder.next();

  std::vector<RunResult> results(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++)
      results[i] = run(cfg, seeds[i], {static_cast<int>(i), false}).result;
  };

  const int threads = std::clamp(parallelism, 1, n);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return aggregate(cfg, results);
}

AggregateReport run_matrix(const ScenarioConfig& cfg, int n, std::uint64_t base_seed, int parallelism) {
  AggregateReport report;
  report.n = n;
  report.base_seed = base_seed;
  for (bool shield : {false, true})
    for (CertMode cert : {CertMode::Off, CertMode::NoStop, CertMode::On}) {
      ScenarioConfig cell = cfg;
      cell.shield = shield;
      cell.cert = cert;
      report.cells.push_back(run_batch(cell, n, base_seed, parallelism));
    }
  return report;
}

nlohmann::ordered_json to_json(const AggregateReport& report) {
  nlohmann::ordered_json j;
  j["n"] = report.n;
  j["base_seed"] = report.base_seed;
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : report.cells) {
    nlohmann::ordered_json cj;
    cj["shield"] = c.shield;
    cj["cert"] = std::string(to_string(c.cert));
    cj["n"] = c.runs;
    cj["aborted"] = c.aborted;
    cj["mean_distance"] = c.mean_distance;
    cj["reached_end_fraction"] = c.reached_end_fraction;
    cj["safe_fraction"] = c.safe_fraction;
    cj["safe_wilson95"] = {c.safe_lo, c.safe_hi};
    cj["false_det_activated"] = c.false_det_activated;
    cj["correct_det_activated"] = c.correct_det_activated;
    cj["rejected_true"] = c.rejected_true;
    cj["rejected_false"] = c.rejected_false;
    cj["steps"] = c.steps;
    j["cells"].push_back(cj);
  }
  return j;
}

std::string render_table(const AggregateReport& report) {
  std::ostringstream os;
  os << std::fixed;
  const int label_w = 16;
  const int col_w = 16;

  auto row = [&](const std::string& label, auto&& cell_text) {
    os << std::left << std::setw(label_w) << label << std::right;
    for (const auto& c : report.cells) os << std::setw(col_w) << cell_text(c);
    os << '\n';
  };
  auto pct = [](double f) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << 100.0 * f << " %";
    return s.str();
  };

  os << "Results after " << report.n << " simulations (base seed " << report.base_seed << ")\n";
  row("Shield", [](const CellReport& c) { return std::string(c.shield ? "known pos." : "none"); });
  row("Cert. control", [](const CellReport& c) { return std::string(to_string(c.cert)); });
  row("Distance", [](const CellReport& c) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << c.mean_distance;
    return s.str();
  });
  row("Reached end", [&](const CellReport& c) { return pct(c.reached_end_fraction); });
  row("Safe", [&](const CellReport& c) { return pct(c.safe_fraction); });
  row("Safe 95% CI", [](const CellReport& c) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << c.safe_lo << "-" << c.safe_hi;
    return s.str();
  });
  row("False Det.", [](const CellReport& c) { return std::to_string(c.false_det_activated); });
  row("Correct Det.", [](const CellReport& c) { return std::to_string(c.correct_det_activated); });
  row("Rejected true", [](const CellReport& c) { return std::to_string(c.rejected_true); });
  row("Rejected false", [](const CellReport& c) { return std::to_string(c.rejected_false); });
  row("Aborted", [](const CellReport& c) { return std::to_string(c.aborted); });
  return os.str();
}

}  // namespace railshield
