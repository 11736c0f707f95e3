#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "disip/planner.hpp"
#include "disip/scenario.hpp"

namespace disip {

struct StructureReport {
  std::string id;
  double weight = 0.0;
  double coverable_area = 0.0;
  double covered_area = 0.0;
  double coverage_ratio = 0.0;
  double reward = 0.0;
  bool visited = false;

  bool operator==(const StructureReport&) const = default;
};

// Per-iteration outcome without wall-clock timings, so reports are
// reproducible byte for byte.
struct IterationSummary {
  std::size_t iteration = 0;
  bool feasible = false;
  double total_reward = 0.0;
  double total_time = 0.0;
  double tour_cost = 0.0;
  std::size_t sampled_count = 0;

  bool operator==(const IterationSummary&) const = default;
};

struct RunReport {
  std::size_t iterations = 0;
  std::size_t best_iteration = 0;
  double t_max = 0.0;
  bool closed_route = true;
  double total_reward = 0.0;
  double total_time = 0.0;
  double available_reward = 0.0;       // sum of w_i * E_i over all structures
  double visited_percent = 0.0;        // structures visited
  double reward_percent = 0.0;         // 100 * total_reward / available_reward
  double coverage_percent = 0.0;       // covered / coverable area, all structures
  double mean_pairwise_distance = 0.0; // bounding-box centres, all pairs
  std::vector<StructureReport> structures;
  std::vector<IterationSummary> history;

  bool operator==(const RunReport&) const = default;
};

RunReport make_report(const RunResult& result, const Scenario& scenario,
                      const std::vector<CoveragePath>& paths, const MissionConfig& mission);

std::string report_to_text(const RunReport& report);
RunReport report_from_text(const std::string& text);

// Running maximum of the feasible rewards in history order.
std::vector<double> best_reward_trace(const std::vector<IterationRecord>& history);

// CSV tables for plotting.
std::string iteration_timings_csv(const std::vector<IterationRecord>& history);
std::string structure_coverage_csv(const RunReport& report);
// Fraction of summed step time spent in the tour solver.
double tsp_time_share(const std::vector<IterationRecord>& history);

// Writes iteration_timings.csv and structure_coverage.csv into `dir`.
void emit_plot_data(const std::filesystem::path& dir, const RunReport& report,
                    const std::vector<IterationRecord>& history);

struct BatchCase {
  std::size_t count = 8;
  AreaBounds bounds;
  double t_max = 1800.0;
  std::uint32_t iterations = 30;
  bool closed_route = true;
  double margin = 5.0;
  std::vector<std::uint64_t> seeds;
};

struct BatchProtocol {
  std::vector<BatchCase> cases;
};

BatchProtocol protocol_from_text(const std::string& text);

struct BatchRun {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  bool feasible = false;
  double coverage_percent = 0.0;
  double reward_percent = 0.0;
  double visited_percent = 0.0;
  double mean_pairwise_distance = 0.0;
  // Wall-clock figures; excluded from the deterministic aggregate.
  double mean_iteration_seconds = 0.0;
  double tsp_share = 0.0;
};

struct BatchRow {
  std::size_t count = 0;
  std::size_t runs = 0;
  std::size_t feasible_runs = 0;
  double mean_coverage_percent = 0.0;
  double mean_reward_percent = 0.0;
  double mean_visited_percent = 0.0;
  double mean_pairwise_distance = 0.0;
  double mean_iteration_seconds = 0.0;
  double mean_tsp_share = 0.0;
};

struct BatchResult {
  std::vector<BatchRun> runs;  // protocol order
  std::vector<BatchRow> rows;  // one per structure count, first-seen order
};

// Generates, covers and plans one scenario per (case, seed) with the built-in
// archetypes. `jobs` > 1 runs scenarios on worker threads; results keep
// protocol order.
BatchResult run_batch(const BatchProtocol& protocol, unsigned jobs = 1);
BatchRun run_single(const BatchCase& c, std::uint64_t seed);

std::string batch_coverage_csv(const BatchResult& result);
std::string batch_timing_csv(const BatchResult& result);

}  // namespace disip
