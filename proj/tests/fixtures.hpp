#pragma once

#include <cmath>
#include <vector>

#include "disip/core.hpp"
#include "disip/motion.hpp"
#include "disip/ssip.hpp"

namespace fixtures {

using disip::Face;
using disip::Pose;
using disip::Vec3;

// Equilateral triangle of side 1 in the plane x = x0, facing -x.
inline disip::TriMesh vertical_triangle(double x0 = 0.0) {
  const double h = std::sqrt(3.0) / 2.0;
  return disip::TriMesh({{x0, 0.5, 0.0}, {x0, -0.5, 0.0}, {x0, 0.0, h}}, {Face{0, 1, 2}});
}

// Closed unit box, 12 triangles, outward normals.
inline disip::TriMesh closed_box(double s = 2.0) {
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i) v.emplace_back((i & 1) ? s : 0.0, (i & 2) ? s : 0.0, (i & 4) ? s : 0.0);
  std::vector<Face> f = {
      {0, 2, 1}, {1, 2, 3},  // z = 0, normal -z
      {4, 5, 6}, {5, 7, 6},  // z = s, normal +z
      {0, 1, 4}, {1, 5, 4},  // y = 0, normal -y
      {2, 6, 3}, {3, 6, 7},  // y = s, normal +y
      {0, 4, 2}, {2, 4, 6},  // x = 0, normal -x
      {1, 3, 5}, {3, 7, 5},  // x = s, normal +x
  };
  return disip::TriMesh(v, f);
}

// `m` vertical wall triangles in a row along y, each with area 0.5 * k for
// face k + 1 so areas are distinguishable.
inline disip::TriMesh strip(std::size_t m) {
  std::vector<Vec3> v;
  std::vector<Face> f;
  for (std::size_t k = 0; k < m; ++k) {
    const double y = 3.0 * static_cast<double>(k);
    const double h = static_cast<double>(k + 1);
    const auto b = static_cast<std::uint32_t>(v.size());
    v.emplace_back(0.0, y, 0.0);
    v.emplace_back(0.0, y + 1.0, 0.0);
    v.emplace_back(0.0, y, h);
    f.push_back({b, b + 1, b + 2});
  }
  return disip::TriMesh(v, f);
}

// Cycle of `m` points spaced along a line so every segment lasts `seg`
// seconds at speed 1. Point k covers face k only.
inline disip::CoveragePath line_path(std::size_t m, double seg, bool cycle = true) {
  disip::CoveragePath p;
  p.structure_id = "line";
  p.is_cycle = cycle;
  for (std::size_t k = 0; k < m; ++k) {
    disip::Viewpoint vp;
    vp.pose = Pose(seg * static_cast<double>(k), 0.0, 0.0, 0.0);
    vp.covered_faces = {static_cast<std::uint32_t>(k)};
    vp.generating_face = static_cast<std::uint32_t>(k);
    p.points.push_back(vp);
    p.cumulative_times.push_back(seg * static_cast<double>(k));
  }
  // The closing leg is also stored as `seg`, even though it is longer in
  // space. Only use this for extraction and reward arithmetic.
  p.total_duration = seg * static_cast<double>(cycle && m > 1 ? m : m - 1);
  return p;
}

}  // namespace fixtures
