#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "disip/random.hpp"
#include "disip/scenario.hpp"
#include "disip/ssip.hpp"
#include "disip/tsp.hpp"

namespace disip {

// Portion of a coverage path flown from an entry point for a given time.
// poses[0] is the entry viewpoint; the last pose is interpolated when the
// time runs out mid-segment and earns no coverage credit.
struct SubPath {
  std::size_t entry_index = 0;
  double duration = 0.0;
  std::vector<std::size_t> visited;  // path indices of fully reached viewpoints
  std::vector<Pose> poses;
  std::vector<double> times;  // relative to the entry, same length as poses
  bool interpolated_end = false;

  const Pose& entry() const { return poses.front(); }
  const Pose& exit() const { return poses.back(); }

  bool operator==(const SubPath&) const = default;
};

SubPath extract_subpath(const CoveragePath& path, std::size_t entry_index, double duration);

// Time available from `entry_index` onwards: the whole path on a cycle,
// the remaining tail otherwise.
double available_duration(const CoveragePath& path, std::size_t entry_index);

std::vector<std::uint32_t> credited_faces(const CoveragePath& path, const SubPath& sub);

struct CoverageGain {
  double covered_area = 0.0;  // m^2
  double ratio = 0.0;         // covered / coverable area
  double reward = 0.0;        // weight * covered area

  bool operator==(const CoverageGain&) const = default;
};

// Coverable area of a path: area of the union of its covered faces.
double coverable_area(const TriMesh& mesh, const CoveragePath& path);

CoverageGain compute_reward(const Structure& structure, const CoveragePath& path,
                            const SubPath& sub);

// Each index in [0, universe) is kept with probability p; empty draws are
// repeated. Returned sorted.
std::vector<std::size_t> sample_structure_subset(std::size_t universe, double p, Rng& rng);

// Proportional rescaling of `raw` so the times sum to min(budget, sum(caps))
// with every entry in [0, caps[i]]; capped surplus is redistributed over the
// remaining entries until nothing exceeds its cap.
std::vector<double> scale_inspection_times(std::span<const double> raw,
                                           std::span<const double> caps, double budget);

// Uniform draws in [0, caps[i]] followed by scale_inspection_times.
std::vector<double> assign_inspection_times(std::span<const double> caps, double budget,
                                            Rng& rng);

struct StructureVisit {
  std::size_t structure = 0;  // index into Scenario::structures
  std::size_t entry_index = 0;
  double inspection_time = 0.0;
  double available_time = 0.0;
  SubPath subpath;
  CoverageGain gain;

  bool operator==(const StructureVisit&) const = default;
};

struct SampledPlan {
  std::vector<StructureVisit> visits;  // ascending structure index
  Tour tour;                           // order over positions in `visits`
  double total_reward = 0.0;
  double total_time = 0.0;

  bool operator==(const SampledPlan&) const = default;
};

struct StepTimings {
  double subset_sampling = 0.0;
  double cost_matrix = 0.0;
  double tsp = 0.0;
  double time_sampling = 0.0;
  double reward = 0.0;
  double total = 0.0;
};

struct IterationRecord {
  std::size_t iteration = 0;
  bool feasible = false;
  double total_reward = 0.0;
  double total_time = 0.0;
  double tour_cost = 0.0;
  std::size_t sampled_count = 0;
  StepTimings timings;
};

// One randomized restart: subset, entry points, tour, time assignment,
// one exit-pose refinement of the tour, rewards. Returns nullopt when the
// tour alone exceeds the budget.
std::optional<SampledPlan> run_iteration(const Scenario& scenario,
                                         const std::vector<CoveragePath>& paths,
                                         const MissionConfig& mission, Rng& rng,
                                         IterationRecord* record = nullptr);

enum class SegmentKind { kInspect, kTransit };

struct PathSample {
  Pose pose;
  double time = 0.0;
  // Kind and structure of the segment that ends at this sample.
  SegmentKind kind = SegmentKind::kInspect;
  std::string structure_id;

  bool operator==(const PathSample&) const = default;
};

struct AssembledPath {
  std::vector<PathSample> samples;
  double total_duration = 0.0;

  bool operator==(const AssembledPath&) const = default;
};

// Concatenates the inspected sub-paths in tour order with straight transit
// legs at v_travel; a closed route returns to the first entry pose.
AssembledPath assemble_path(const SampledPlan& plan, const Scenario& scenario,
                            bool closed_route);

class NoFeasiblePlan : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunResult {
  SampledPlan best;
  std::size_t best_iteration = 0;
  AssembledPath path;
  std::vector<IterationRecord> history;
};

// SSIP-lite path for every structure; structure i uses derive_seed(seed,
// 1000 + i) so adding structures does not disturb earlier tours.
std::vector<CoveragePath> cover_scenario(const Scenario& scenario, std::uint64_t seed);

// Runs mission.iterations independent iterations and keeps the highest
// reward (earliest on ties). Throws NoFeasiblePlan if every iteration was
// discarded.
RunResult run_planner(const Scenario& scenario, const std::vector<CoveragePath>& paths,
                      const MissionConfig& mission);

}  // namespace disip
