#include "disip/core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace disip {

double normalize_yaw(double psi) {
  if (!std::isfinite(psi)) {
    throw std::invalid_argument("normalize_yaw: non-finite angle");
  }
  double r = std::fmod(psi, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  if (r > kPi) r -= 2.0 * kPi;
  return r;
}

double angular_distance(double a, double b) {
  return std::abs(normalize_yaw(b - a));
}

Pose::Pose(double x_, double y_, double z_, double psi_)
    : x(x_), y(y_), z(z_), psi(normalize_yaw(psi_)) {}

double distance(const Pose& a, const Pose& b) {
  return (a.position() - b.position()).norm();
}

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  if (faces_.empty()) throw std::invalid_argument("mesh has no faces");
  for (const auto& v : vertices_) {
    if (!v.allFinite()) throw std::invalid_argument("mesh has non-finite vertex");
  }
  centroids_.reserve(faces_.size());
  normals_.reserve(faces_.size());
  areas_.reserve(faces_.size());
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (auto idx : faces_[f]) {
      if (idx >= vertices_.size()) {
        throw std::invalid_argument("face " + std::to_string(f) +
                                    " references missing vertex " + std::to_string(idx));
      }
    }
    const Vec3& a = vertices_[faces_[f][0]];
    const Vec3& b = vertices_[faces_[f][1]];
    const Vec3& c = vertices_[faces_[f][2]];
    const Vec3 cross = (b - a).cross(c - a);
    const double twice_area = cross.norm();
    const double scale = std::max({(b - a).squaredNorm(), (c - a).squaredNorm(), 1e-300});
    if (!(twice_area > 1e-12 * scale)) {
      throw std::invalid_argument("face " + std::to_string(f) + " is degenerate");
    }
    centroids_.push_back((a + b + c) / 3.0);
    normals_.push_back(cross / twice_area);
    areas_.push_back(0.5 * twice_area);
    total_area_ += 0.5 * twice_area;
  }
}

double TriMesh::circumradius(std::size_t f) const {
  const auto& face = faces_.at(f);
  const double a = (vertices_[face[1]] - vertices_[face[0]]).norm();
  const double b = (vertices_[face[2]] - vertices_[face[1]]).norm();
  const double c = (vertices_[face[0]] - vertices_[face[2]]).norm();
  return a * b * c / (4.0 * areas_[f]);
}

Vec3 TriMesh::min_corner() const {
  Vec3 m = Vec3::Constant(std::numeric_limits<double>::infinity());
  for (const auto& v : vertices_) m = m.cwiseMin(v);
  return m;
}

Vec3 TriMesh::max_corner() const {
  Vec3 m = Vec3::Constant(-std::numeric_limits<double>::infinity());
  for (const auto& v : vertices_) m = m.cwiseMax(v);
  return m;
}

TriMesh TriMesh::transformed(const Pose& pose) const {
  const double c = std::cos(pose.psi);
  const double s = std::sin(pose.psi);
  std::vector<Vec3> out;
  out.reserve(vertices_.size());
  for (const auto& v : vertices_) {
    out.emplace_back(c * v.x() - s * v.y() + pose.x, s * v.x() + c * v.y() + pose.y,
                     v.z() + pose.z);
  }
  return TriMesh(std::move(out), faces_);
}

double mesh_area(const TriMesh& mesh) { return mesh.total_area(); }

void Structure::validate() const {
  if (id.empty()) throw std::invalid_argument("structure id is empty");
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("structure '" + id + "' has invalid importance weight");
  }
  if (mesh.empty()) throw std::invalid_argument("structure '" + id + "' has an empty mesh");
}

void VehicleConfig::validate() const {
  if (!(v_travel > 0.0) || !(v_inspect > 0.0) || !(yaw_rate_max > 0.0) ||
      !std::isfinite(v_travel) || !std::isfinite(v_inspect) || !std::isfinite(yaw_rate_max)) {
    throw std::invalid_argument("vehicle speeds and yaw rate must be positive and finite");
  }
}

void SensorConfig::validate() const {
  if (!(fov_h > 0.0 && fov_h < kPi) || !(fov_v > 0.0 && fov_v < kPi)) {
    throw std::invalid_argument("sensor field of view must lie in (0, pi)");
  }
  if (!(range_min > 0.0 && range_min < range_max) || !std::isfinite(range_max)) {
    throw std::invalid_argument("sensor range must satisfy 0 < range_min < range_max");
  }
  if (!std::isfinite(camera_pitch)) throw std::invalid_argument("camera pitch must be finite");
  if (!(incidence_max > 0.0 && incidence_max <= kPi / 2)) {
    throw std::invalid_argument("incidence tolerance must lie in (0, pi/2]");
  }
}

void MissionConfig::validate() const {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("t_max must be positive");
  }
  if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  if (!(inclusion_probability > 0.0 && inclusion_probability <= 1.0)) {
    throw std::invalid_argument("inclusion probability must lie in (0, 1]");
  }
}

}  // namespace disip
