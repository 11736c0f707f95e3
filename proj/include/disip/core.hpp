#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace disip {

using Vec3 = Eigen::Vector3d;

constexpr double kPi = 3.14159265358979323846;

// Wraps an angle into (-pi, pi]. Throws std::invalid_argument on NaN/inf.
double normalize_yaw(double psi);

// Shortest angular distance between two yaws, in [0, pi].
double angular_distance(double a, double b);

// Rotorcraft configuration: position plus heading. Roll and pitch are
// assumed zero.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double psi = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double z_, double psi_);

  Vec3 position() const { return {x, y, z}; }

  bool operator==(const Pose&) const = default;
};

double distance(const Pose& a, const Pose& b);

using Face = std::array<std::uint32_t, 3>;

// Validated triangle mesh. Immutable once built; the per-face centroid,
// outward normal (right-hand rule on vertex order) and area are cached.
class TriMesh {
 public:
  TriMesh() = default;

  // Throws std::invalid_argument for an empty mesh, out-of-range indices,
  // non-finite coordinates or zero-area faces.
  TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  std::size_t face_count() const { return faces_.size(); }
  bool empty() const { return faces_.empty(); }

  const Vec3& centroid(std::size_t f) const { return centroids_.at(f); }
  const Vec3& normal(std::size_t f) const { return normals_.at(f); }
  double face_area(std::size_t f) const { return areas_.at(f); }
  double circumradius(std::size_t f) const;

  double total_area() const { return total_area_; }

  // Axis-aligned bounds over all vertices.
  Vec3 min_corner() const;
  Vec3 max_corner() const;

  // Rotation about +z by pose.psi followed by translation.
  TriMesh transformed(const Pose& pose) const;

  bool operator==(const TriMesh& other) const {
    return vertices_ == other.vertices_ && faces_ == other.faces_;
  }

 private:
  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<Vec3> centroids_;
  std::vector<Vec3> normals_;
  std::vector<double> areas_;
  double total_area_ = 0.0;
};

double mesh_area(const TriMesh& mesh);

struct Structure {
  std::string id;
  TriMesh mesh;  // world frame
  double weight = 1.0;

  void validate() const;
  bool operator==(const Structure&) const = default;
};

struct VehicleConfig {
  double v_travel = 3.0;        // m/s
  double v_inspect = 1.0;       // m/s
  double yaw_rate_max = 0.5;    // rad/s

  void validate() const;
  bool operator==(const VehicleConfig&) const = default;
};

// fov_h / fov_v are full opening angles; the pyramid half-angles are half of
// them. camera_pitch tilts the optical axis downward for positive values.
struct SensorConfig {
  double fov_h = 65.0 * kPi / 180.0;
  double fov_v = 65.0 * kPi / 180.0;
  double range_min = 1.0;
  double range_max = 15.0;
  double camera_pitch = 0.0;
  double incidence_max = 60.0 * kPi / 180.0;

  void validate() const;
  bool operator==(const SensorConfig&) const = default;
};

struct MissionConfig {
  double t_max = 1800.0;
  bool closed_route = true;
  std::uint32_t iterations = 30;
  std::uint64_t rng_seed = 1;
  double inclusion_probability = 0.5;

  void validate() const;
  bool operator==(const MissionConfig&) const = default;
};

}  // namespace disip
