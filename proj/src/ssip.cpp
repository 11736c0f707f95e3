#include "disip/ssip.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "disip/motion.hpp"
#include "disip/tsp.hpp"

namespace disip {

namespace {

constexpr double kAngleTol = 1e-9;
constexpr double kRangeTol = 1e-9;
// Coverage tours are small and symmetric; a few restarts suffice.
constexpr std::size_t kCoverageTourStarts = 4;
constexpr std::size_t kCoverageTourKicks = 5;

struct CameraFrame {
  Vec3 forward;
  Vec3 right;
  Vec3 up;
};

CameraFrame camera_frame(double yaw, double pitch) {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  return {Vec3(cp * cy, cp * sy, -sp), Vec3(sy, -cy, 0.0), Vec3(sp * cy, sp * sy, cp)};
}

void sort_unique(std::vector<std::uint32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

double CoveragePath::segment_duration(std::size_t k) const {
  if (k + 1 < points.size()) return cumulative_times[k + 1] - cumulative_times[k];
  if (k + 1 == points.size() && is_cycle) return total_duration - cumulative_times[k];
  throw std::out_of_range("segment index past the end of an open path");
}

std::vector<std::uint32_t> CoveragePath::coverable_faces() const {
  std::vector<std::uint32_t> all;
  for (const auto& p : points) all.insert(all.end(), p.covered_faces.begin(), p.covered_faces.end());
  sort_unique(all);
  return all;
}

std::vector<std::uint32_t> visible_faces(const Pose& pose, const TriMesh& mesh,
                                         const SensorConfig& sensor) {
  const CameraFrame cam = camera_frame(pose.psi, sensor.camera_pitch);
  const Vec3 origin = pose.position();
  const double half_h = 0.5 * sensor.fov_h + kAngleTol;
  const double half_v = 0.5 * sensor.fov_v + kAngleTol;
  std::vector<std::uint32_t> out;
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const Vec3 ray = mesh.centroid(f) - origin;
    const double range = ray.norm();
    if (range < sensor.range_min - kRangeTol || range > sensor.range_max + kRangeTol) continue;
    const double fwd = ray.dot(cam.forward);
    if (fwd <= 0.0) continue;
    if (std::atan2(std::abs(ray.dot(cam.right)), fwd) > half_h) continue;
    if (std::atan2(std::abs(ray.dot(cam.up)), fwd) > half_v) continue;
    if (mesh.normal(f).dot(ray) >= 0.0) continue;
    out.push_back(static_cast<std::uint32_t>(f));
  }
  return out;
}

std::optional<Viewpoint> synthesize_viewpoint(const TriMesh& mesh, std::size_t face,
                                              const SensorConfig& sensor) {
  if (face >= mesh.face_count()) throw std::out_of_range("synthesize_viewpoint: invalid face index");
  const Vec3& n = mesh.normal(face);
  const Vec3& c = mesh.centroid(face);

  const double hx = -n.x(), hy = -n.y();
  const double yaw = std::hypot(hx, hy) < 1e-9 ? 0.0 : std::atan2(hy, hx);
  const CameraFrame cam = camera_frame(yaw, sensor.camera_pitch);
  const double cos_incidence = cam.forward.dot(-n);
  if (cos_incidence < std::cos(sensor.incidence_max) - kAngleTol) return std::nullopt;

  const double half_fov = 0.5 * std::min(sensor.fov_h, sensor.fov_v);
  const double fit = mesh.circumradius(face) / std::tan(half_fov);
  if (fit > sensor.range_max) return std::nullopt;
  const double standoff = std::clamp(fit, sensor.range_min, sensor.range_max);

  const Vec3 pos = c - standoff * cam.forward;
  Viewpoint vp;
  vp.pose = Pose(pos.x(), pos.y(), pos.z(), yaw);
  vp.generating_face = static_cast<std::uint32_t>(face);
  vp.covered_faces = visible_faces(vp.pose, mesh, sensor);
  if (!std::binary_search(vp.covered_faces.begin(), vp.covered_faces.end(),
                          static_cast<std::uint32_t>(face))) {
    return std::nullopt;
  }
  return vp;
}

CoveragePath plan_coverage(const Structure& structure, const SensorConfig& sensor,
                           const VehicleConfig& vehicle, std::uint64_t seed) {
  std::vector<Viewpoint> viewpoints;
  std::vector<bool> coverable(structure.mesh.face_count(), false);
  for (std::size_t f = 0; f < structure.mesh.face_count(); ++f) {
    if (auto vp = synthesize_viewpoint(structure.mesh, f, sensor)) {
      coverable[f] = true;
      viewpoints.push_back(std::move(*vp));
    }
  }
  if (viewpoints.empty()) {
    throw PlanningError("structure '" + structure.id + "' has no coverable faces");
  }
  for (auto& vp : viewpoints) {
    std::erase_if(vp.covered_faces, [&](std::uint32_t f) { return !coverable[f]; });
  }

  std::vector<NodePoses> nodes;
  nodes.reserve(viewpoints.size());
  for (const auto& vp : viewpoints) nodes.push_back({vp.pose, vp.pose});
  const CostMatrix costs = build_cost_matrix(nodes, vehicle.v_inspect, vehicle.yaw_rate_max);
  const Tour tour = solve_tsp(costs, /*closed=*/true, seed, {kCoverageTourStarts, kCoverageTourKicks});

  CoveragePath path;
  path.structure_id = structure.id;
  path.is_cycle = true;
  double t = 0.0;
  for (std::size_t k = 0; k < tour.order.size(); ++k) {
    if (k > 0) {
      t += travel_time(viewpoints[tour.order[k - 1]].pose, viewpoints[tour.order[k]].pose,
                       vehicle.v_inspect, vehicle.yaw_rate_max);
    }
    path.points.push_back(viewpoints[tour.order[k]]);
    path.cumulative_times.push_back(t);
  }
  if (path.points.size() > 1) {
    t += travel_time(path.points.back().pose, path.points.front().pose, vehicle.v_inspect,
                     vehicle.yaw_rate_max);
  }
  path.total_duration = t;
  return path;
}

IngestResult ingest_coverage_path(const std::string& structure_id,
                                  const std::vector<CoverageRecord>& records, bool is_cycle,
                                  std::size_t face_count, const VehicleConfig& vehicle) {
  if (records.empty()) throw std::invalid_argument("coverage path '" + structure_id + "' is empty");
  IngestResult result;
  CoveragePath& path = result.path;
  path.structure_id = structure_id;
  path.is_cycle = is_cycle;

  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& rec = records[k];
    Viewpoint vp;
    vp.pose = Pose(rec.pose.x, rec.pose.y, rec.pose.z, rec.pose.psi);
    vp.covered_faces = rec.covered_faces;
    for (auto f : vp.covered_faces) {
      if (f >= face_count) {
        throw std::invalid_argument("coverage path '" + structure_id + "' point " +
                                    std::to_string(k) + " covers face " + std::to_string(f) +
                                    " but the mesh has " + std::to_string(face_count) + " faces");
      }
    }
    sort_unique(vp.covered_faces);
    if (rec.generating_face) {
      if (!std::binary_search(vp.covered_faces.begin(), vp.covered_faces.end(),
                              *rec.generating_face)) {
        throw std::invalid_argument("coverage path '" + structure_id + "' point " +
                                    std::to_string(k) +
                                    ": generating face is not among the covered faces");
      }
      vp.generating_face = rec.generating_face;
    }
    if (!std::isfinite(rec.cumulative_time) ||
        (k > 0 && rec.cumulative_time < records[k - 1].cumulative_time)) {
      throw std::invalid_argument("coverage path '" + structure_id +
                                  "' has non-monotone times at point " + std::to_string(k));
    }
    path.points.push_back(std::move(vp));
  }

  double t = 0.0;
  path.cumulative_times.push_back(0.0);
  for (std::size_t k = 1; k < path.points.size(); ++k) {
    const double bvs = travel_time(path.points[k - 1].pose, path.points[k].pose,
                                   vehicle.v_inspect, vehicle.yaw_rate_max);
    const double recorded = records[k].cumulative_time - records[k - 1].cumulative_time;
    if (std::abs(recorded - bvs) > 0.05 * bvs + 1e-9) {
      std::ostringstream msg;
      msg << "coverage path '" << structure_id << "' segment " << k - 1 << "->" << k
          << ": recorded " << recorded << " s, re-timed to " << bvs << " s";
      result.warnings.push_back(msg.str());
    }
    t += bvs;
    path.cumulative_times.push_back(t);
  }
  if (is_cycle && path.points.size() > 1) {
    t += travel_time(path.points.back().pose, path.points.front().pose, vehicle.v_inspect,
                     vehicle.yaw_rate_max);
  }
  path.total_duration = t;
  return result;
}

}  // namespace disip
