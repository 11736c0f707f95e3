#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "disip/core.hpp"
#include "disip/random.hpp"

namespace disip {

struct AreaBounds {
  double dx = 200.0;
  double dy = 200.0;
  double dz = 50.0;

  bool operator==(const AreaBounds&) const = default;
};

struct Scenario {
  std::vector<Structure> structures;
  AreaBounds bounds;
  VehicleConfig vehicle;
  SensorConfig sensor;
  MissionConfig mission;

  void validate() const;
  bool operator==(const Scenario&) const = default;
};

struct Archetype {
  std::string name;
  TriMesh mesh;  // local frame, centred on the origin, nothing below z = 0
  double default_weight = 1.0;
};

// Procedural stand-ins for the four facility types: solar panel rows, a
// storage tank, a large hall and a compact transformer.
std::vector<Archetype> builtin_archetypes();

// Closed box without a bottom face, each side subdivided into cells of at
// most `cell` metres. Centred on the origin in x/y, resting on z = 0.
TriMesh make_box(double sx, double sy, double sz, double cell, Vec3 offset = Vec3::Zero());

class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Places `count` random archetypes at random ground positions and yaws inside
// the area, rejecting placements whose footprints come within `margin` of an
// existing one. Throws PlacementError after 10000 failed attempts for a
// single structure.
Scenario generate_scenario(const std::vector<Archetype>& archetypes, std::size_t count,
                           const AreaBounds& bounds, double margin, Rng& rng);

// Independent check of the placement invariants; returns a description of
// the first violation or an empty string.
std::string placement_violation(const Scenario& scenario, double margin);

// Mean distance between bounding-box centres over all structure pairs.
double mean_pairwise_distance(const Scenario& scenario);

}  // namespace disip
