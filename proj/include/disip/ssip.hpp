#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "disip/core.hpp"

namespace disip {

struct Viewpoint {
  Pose pose;
  // Face the viewpoint was synthesized for; absent for ingested external
  // paths that do not carry one.
  std::optional<std::uint32_t> generating_face;
  std::vector<std::uint32_t> covered_faces;  // sorted, unique

  bool operator==(const Viewpoint&) const = default;
};

// Timed full-coverage path of one structure. cumulative_times[k] is the
// arrival time at points[k]; for a cycle, total_duration also includes the
// closing segment back to points[0].
struct CoveragePath {
  std::string structure_id;
  std::vector<Viewpoint> points;
  std::vector<double> cumulative_times;
  double total_duration = 0.0;
  bool is_cycle = true;

  std::size_t size() const { return points.size(); }
  // Duration of the segment leaving point k (wrapping on cycles).
  double segment_duration(std::size_t k) const;
  // Union of covered faces over all points: the faces this path can credit.
  std::vector<std::uint32_t> coverable_faces() const;

  bool operator==(const CoveragePath&) const = default;
};

class PlanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Camera-frame FoV/range/front-facing test of every face centroid. Occlusion
// is not modelled.
std::vector<std::uint32_t> visible_faces(const Pose& pose, const TriMesh& mesh,
                                         const SensorConfig& sensor);

// Viewpoint that centres `face` on the optical axis at the stand-off needed
// to fit its circumcircle in the narrower FoV, clamped to the sensor range.
// Returns nullopt when the face is uncoverable.
std::optional<Viewpoint> synthesize_viewpoint(const TriMesh& mesh, std::size_t face,
                                              const SensorConfig& sensor);

CoveragePath plan_coverage(const Structure& structure, const SensorConfig& sensor,
                           const VehicleConfig& vehicle, std::uint64_t seed);

struct CoverageRecord {
  Pose pose;
  double cumulative_time = 0.0;
  std::vector<std::uint32_t> covered_faces;
  std::optional<std::uint32_t> generating_face;
};

struct IngestResult {
  CoveragePath path;
  std::vector<std::string> warnings;
};

// Validates an externally computed path against its mesh and re-times every
// segment with travel_time at v_inspect. Deviations above 5% are reported in
// `warnings`.
IngestResult ingest_coverage_path(const std::string& structure_id,
                                  const std::vector<CoverageRecord>& records, bool is_cycle,
                                  std::size_t face_count, const VehicleConfig& vehicle);

}  // namespace disip
