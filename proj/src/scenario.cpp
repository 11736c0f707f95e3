#include "disip/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace disip {

namespace {

constexpr std::size_t kMaxPlacementAttempts = 10000;
constexpr double kPlacementTol = 1e-9;

class MeshBuilder {
 public:
  // Adds the quad p00-p10-p11-p01 split into nu x nv cells, each cell two
  // triangles wound so their normals point along `outward`.
  void add_grid(const Vec3& p00, const Vec3& p10, const Vec3& p01, std::size_t nu,
                std::size_t nv, const Vec3& outward) {
    const Vec3 du = (p10 - p00) / static_cast<double>(nu);
    const Vec3 dv = (p01 - p00) / static_cast<double>(nv);
    const bool flip = du.cross(dv).dot(outward) < 0.0;
    const auto base = static_cast<std::uint32_t>(vertices_.size());
    for (std::size_t j = 0; j <= nv; ++j) {
      for (std::size_t i = 0; i <= nu; ++i) {
        vertices_.push_back(p00 + static_cast<double>(i) * du + static_cast<double>(j) * dv);
      }
    }
    const auto at = [&](std::size_t i, std::size_t j) {
      return base + static_cast<std::uint32_t>(j * (nu + 1) + i);
    };
    for (std::size_t j = 0; j < nv; ++j) {
      for (std::size_t i = 0; i < nu; ++i) {
        add_tri(at(i, j), at(i + 1, j), at(i + 1, j + 1), flip);
        add_tri(at(i, j), at(i + 1, j + 1), at(i, j + 1), flip);
      }
    }
  }

  std::uint32_t add_vertex(const Vec3& v) {
    vertices_.push_back(v);
    return static_cast<std::uint32_t>(vertices_.size() - 1);
  }

  void add_tri(std::uint32_t a, std::uint32_t b, std::uint32_t c, bool flip = false) {
    faces_.push_back(flip ? Face{a, c, b} : Face{a, b, c});
  }

  TriMesh build() { return TriMesh(std::move(vertices_), std::move(faces_)); }

 private:
  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
};

std::size_t cells(double length, double cell) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / cell - 1e-9)));
}

void add_box(MeshBuilder& mb, double sx, double sy, double sz, double cell, const Vec3& offset) {
  const double hx = 0.5 * sx, hy = 0.5 * sy;
  const Vec3 o = offset;
  const auto P = [&](double x, double y, double z) -> Vec3 { return o + Vec3(x, y, z); };
  mb.add_grid(P(hx, -hy, 0), P(hx, hy, 0), P(hx, -hy, sz), cells(sy, cell), cells(sz, cell),
              Vec3::UnitX());
  mb.add_grid(P(-hx, -hy, 0), P(-hx, hy, 0), P(-hx, -hy, sz), cells(sy, cell), cells(sz, cell),
              -Vec3::UnitX());
  mb.add_grid(P(-hx, hy, 0), P(hx, hy, 0), P(-hx, hy, sz), cells(sx, cell), cells(sz, cell),
              Vec3::UnitY());
  mb.add_grid(P(-hx, -hy, 0), P(hx, -hy, 0), P(-hx, -hy, sz), cells(sx, cell), cells(sz, cell),
              -Vec3::UnitY());
  mb.add_grid(P(-hx, -hy, sz), P(hx, -hy, sz), P(-hx, hy, sz), cells(sx, cell), cells(sy, cell),
              Vec3::UnitZ());
}

TriMesh panel_rows() {
  MeshBuilder mb;
  const double tilt = 35.0 * kPi / 180.0;
  const double slant = 3.0, length = 12.0, spacing = 6.0, lower_edge = 0.8;
  for (int row = 0; row < 4; ++row) {
    const double x0 = (row - 1.5) * spacing + 0.5 * slant * std::cos(tilt);
    const Vec3 p00(x0, -0.5 * length, lower_edge);
    const Vec3 p10(x0, 0.5 * length, lower_edge);
    const Vec3 p01(x0 - slant * std::cos(tilt), -0.5 * length, lower_edge + slant * std::sin(tilt));
    mb.add_grid(p00, p10, p01, 4, 1, Vec3(std::sin(tilt), 0.0, std::cos(tilt)));
  }
  return mb.build();
}

TriMesh storage_tank() {
  MeshBuilder mb;
  const double radius = 6.0, height = 10.0;
  const std::size_t segments = 16, bands = 3;
  std::vector<std::vector<std::uint32_t>> ring(bands + 1);
  for (std::size_t b = 0; b <= bands; ++b) {
    const double z = height * static_cast<double>(b) / bands;
    for (std::size_t s = 0; s < segments; ++s) {
      const double a = 2.0 * kPi * static_cast<double>(s) / segments;
      ring[b].push_back(mb.add_vertex({radius * std::cos(a), radius * std::sin(a), z}));
    }
  }
  for (std::size_t b = 0; b < bands; ++b) {
    for (std::size_t s = 0; s < segments; ++s) {
      const std::size_t t = (s + 1) % segments;
      mb.add_tri(ring[b][s], ring[b][t], ring[b + 1][t]);
      mb.add_tri(ring[b][s], ring[b + 1][t], ring[b + 1][s]);
    }
  }
  const std::uint32_t apex = mb.add_vertex({0.0, 0.0, height + 1.5});
  for (std::size_t s = 0; s < segments; ++s) {
    mb.add_tri(ring[bands][s], ring[bands][(s + 1) % segments], apex);
  }
  return mb.build();
}

TriMesh storage_hall() {
  MeshBuilder mb;
  add_box(mb, 30.0, 15.0, 8.0, 5.0, Vec3::Zero());
  return mb.build();
}

TriMesh transformer() {
  MeshBuilder mb;
  add_box(mb, 4.0, 2.5, 3.0, 1.5, Vec3::Zero());
  add_box(mb, 0.6, 2.5, 2.2, 1.5, Vec3(2.6, 0.0, 0.0));
  add_box(mb, 0.6, 2.5, 2.2, 1.5, Vec3(-2.6, 0.0, 0.0));
  for (int k = -1; k <= 1; ++k) add_box(mb, 0.4, 0.4, 1.5, 1.0, Vec3(1.2 * k, 0.0, 3.0));
  return mb.build();
}

struct Footprint {
  Vec3 lo, hi;
};

bool too_close(const Footprint& a, const Footprint& b, double margin) {
  return a.lo.x() < b.hi.x() + margin && b.lo.x() < a.hi.x() + margin &&
         a.lo.y() < b.hi.y() + margin && b.lo.y() < a.hi.y() + margin;
}

}  // namespace

TriMesh make_box(double sx, double sy, double sz, double cell, Vec3 offset) {
  MeshBuilder mb;
  add_box(mb, sx, sy, sz, cell, offset);
  return mb.build();
}

std::vector<Archetype> builtin_archetypes() {
  return {
      {"panels", panel_rows(), 0.25},
      {"tank", storage_tank(), 1.0},
      {"hall", storage_hall(), 1.0},
      {"transformer", transformer(), 1.0},
  };
}

void Scenario::validate() const {
  if (structures.empty()) throw std::invalid_argument("scenario has no structures");
  std::set<std::string> ids;
  for (const auto& s : structures) {
    s.validate();
    if (!ids.insert(s.id).second) throw std::invalid_argument("duplicate structure id '" + s.id + "'");
  }
  if (!(bounds.dx > 0 && bounds.dy > 0 && bounds.dz > 0)) {
    throw std::invalid_argument("area bounds must be positive");
  }
  vehicle.validate();
  sensor.validate();
  mission.validate();
}

Scenario generate_scenario(const std::vector<Archetype>& archetypes, std::size_t count,
                           const AreaBounds& bounds, double margin, Rng& rng) {
  if (count == 0) throw std::invalid_argument("structure count must be at least 1");
  if (archetypes.empty()) throw std::invalid_argument("no archetypes to place");
  if (!(margin >= 0.0)) throw std::invalid_argument("placement margin must be non-negative");

  Scenario scenario;
  scenario.bounds = bounds;
  std::vector<Footprint> placed;
  for (std::size_t i = 0; i < count; ++i) {
    bool done = false;
    for (std::size_t attempt = 0; attempt < kMaxPlacementAttempts && !done; ++attempt) {
      const Archetype& arch = archetypes[rng.index(archetypes.size())];
      const double yaw = rng.uniform(-kPi, kPi);
      const TriMesh rotated = arch.mesh.transformed(Pose(0.0, 0.0, 0.0, yaw));
      const Vec3 lo = rotated.min_corner(), hi = rotated.max_corner();
      const double x_min = -lo.x(), x_max = bounds.dx - hi.x();
      const double y_min = -lo.y(), y_max = bounds.dy - hi.y();
      const double x = rng.uniform(x_min, x_max);
      const double y = rng.uniform(y_min, y_max);
      if (x_min > x_max || y_min > y_max || hi.z() > bounds.dz || lo.z() < 0.0) continue;
      const Footprint fp{lo + Vec3(x, y, 0.0), hi + Vec3(x, y, 0.0)};
      if (std::any_of(placed.begin(), placed.end(),
                      [&](const Footprint& other) { return too_close(fp, other, margin); })) {
        continue;
      }
      char id[64];
      std::snprintf(id, sizeof(id), "s%02zu_%s", i, arch.name.c_str());
      scenario.structures.push_back(
          {id, arch.mesh.transformed(Pose(x, y, 0.0, yaw)), arch.default_weight});
      placed.push_back(fp);
      done = true;
    }
    if (!done) {
      throw PlacementError("could not place structure " + std::to_string(i) + " of " +
                           std::to_string(count) + " after " +
                           std::to_string(kMaxPlacementAttempts) + " attempts");
    }
  }
  return scenario;
}

std::string placement_violation(const Scenario& scenario, double margin) {
  std::vector<Footprint> boxes;
  for (const auto& s : scenario.structures) {
    const Footprint fp{s.mesh.min_corner(), s.mesh.max_corner()};
    if (fp.lo.x() < -kPlacementTol || fp.lo.y() < -kPlacementTol || fp.lo.z() < -kPlacementTol ||
        fp.hi.x() > scenario.bounds.dx + kPlacementTol ||
        fp.hi.y() > scenario.bounds.dy + kPlacementTol ||
        fp.hi.z() > scenario.bounds.dz + kPlacementTol) {
      return "structure '" + s.id + "' leaves the area bounds";
    }
    boxes.push_back(fp);
  }
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      if (too_close(boxes[i], boxes[j], margin - kPlacementTol)) {
        return "structures '" + scenario.structures[i].id + "' and '" +
               scenario.structures[j].id + "' are closer than the margin";
      }
    }
  }
  return {};
}

double mean_pairwise_distance(const Scenario& scenario) {
  std::vector<Vec3> centres;
  for (const auto& s : scenario.structures) {
    centres.push_back(0.5 * (s.mesh.min_corner() + s.mesh.max_corner()));
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < centres.size(); ++i) {
    for (std::size_t j = i + 1; j < centres.size(); ++j) {
      sum += (centres[i] - centres[j]).norm();
      ++pairs;
    }
  }
  return pairs ? sum / static_cast<double>(pairs) : 0.0;
}

}  // namespace disip
