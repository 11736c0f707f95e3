#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "disip/planner.hpp"
#include "disip/scenario.hpp"
#include "disip/ssip.hpp"

// JSON artifact formats. Every file carries a "schema" tag; all numbers are
// SI (metres, radians, seconds). Doubles are written in shortest round-trip
// form and object keys in a fixed order, so identical inputs produce
// identical bytes.
namespace disip::io {

inline constexpr const char* kScenarioSchema = "disip.scenario/1";
inline constexpr const char* kCoveragePathSchema = "disip.coverage_path/1";
inline constexpr const char* kPlanSchema = "disip.plan/1";
inline constexpr const char* kReportSchema = "disip.report/1";
inline constexpr const char* kProtocolSchema = "disip.protocol/1";

// Names the offending field, e.g. "structures[3].mesh.faces: missing field".
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::filesystem::path& file);
void write_text(const std::filesystem::path& file, const std::string& text);

// Scenario. Structures may carry an optional "pose"; the loader bakes it
// into the vertices, and the writer always emits world-frame vertices.
std::string scenario_to_text(const Scenario& scenario);
Scenario scenario_from_text(const std::string& text);
void write_scenario(const std::filesystem::path& file, const Scenario& scenario);
Scenario read_scenario(const std::filesystem::path& file);

// Coverage path. Reading goes through ingest_coverage_path, so external
// files are validated against the mesh and re-timed.
std::string coverage_path_to_text(const CoveragePath& path);
IngestResult coverage_path_from_text(const std::string& text, std::size_t face_count,
                                     const VehicleConfig& vehicle);
std::filesystem::path coverage_file_name(const std::string& structure_id);

struct PlanVisit {
  std::string structure_id;
  std::size_t entry_index = 0;
  double inspection_time = 0.0;
  double available_time = 0.0;
  double covered_area = 0.0;
  double coverage_ratio = 0.0;
  double reward = 0.0;
  std::vector<std::uint32_t> credited_faces;

  bool operator==(const PlanVisit&) const = default;
};

// Flattened, self-contained plan: enough to fly and to re-check timing.
struct PlanFile {
  bool closed_route = true;
  double t_max = 0.0;
  std::size_t best_iteration = 0;
  double total_reward = 0.0;
  double total_time = 0.0;
  double tour_cost = 0.0;
  std::vector<std::string> tour;  // structure ids in visiting order
  std::vector<PlanVisit> visits;  // in visiting order
  AssembledPath path;

  bool operator==(const PlanFile&) const = default;
};

PlanFile make_plan_file(const RunResult& result, const Scenario& scenario,
                        const std::vector<CoveragePath>& paths, const MissionConfig& mission);
std::string plan_to_text(const PlanFile& plan);
PlanFile plan_from_text(const std::string& text);

struct PlanCheck {
  bool ok = false;
  double retimed_duration = 0.0;
  std::string error;
};

// Re-times every path segment with travel_time at the speed its label
// implies and confirms the stored times and the budget.
PlanCheck validate_plan(const PlanFile& plan, const Scenario& scenario, double tol = 1e-6);

}  // namespace disip::io
