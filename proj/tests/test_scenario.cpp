#include <set>

#include <gtest/gtest.h>

#include "disip/scenario.hpp"

using namespace disip;

namespace {

// Placement check written against raw vertex extents only.
void expect_valid_placement(const Scenario& sc, double margin) {
  std::vector<std::pair<Vec3, Vec3>> boxes;
  for (const auto& s : sc.structures) {
    Vec3 lo = s.mesh.vertices().front(), hi = lo;
    for (const auto& v : s.mesh.vertices()) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    EXPECT_GE(lo.x(), -1e-9);
    EXPECT_GE(lo.y(), -1e-9);
    EXPECT_GE(lo.z(), -1e-9);
    EXPECT_LE(hi.x(), sc.bounds.dx + 1e-9);
    EXPECT_LE(hi.y(), sc.bounds.dy + 1e-9);
    EXPECT_LE(hi.z(), sc.bounds.dz + 1e-9);
    boxes.emplace_back(lo, hi);
  }
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      const auto& [alo, ahi] = boxes[i];
      const auto& [blo, bhi] = boxes[j];
      const double gap_x = std::max(blo.x() - ahi.x(), alo.x() - bhi.x());
      const double gap_y = std::max(blo.y() - ahi.y(), alo.y() - bhi.y());
      EXPECT_GE(std::max(gap_x, gap_y), margin - 1e-9) << i << " vs " << j;
    }
  }
  std::set<std::string> ids;
  for (const auto& s : sc.structures) EXPECT_TRUE(ids.insert(s.id).second);
}

}  // namespace

TEST(Archetypes, ValidateAndDiffer) {
  const auto arch = builtin_archetypes();
  ASSERT_EQ(arch.size(), 4u);
  std::set<std::size_t> counts;
  std::set<std::string> names;
  for (const auto& a : arch) {
    EXPECT_NO_THROW((Structure{a.name, a.mesh, a.default_weight}.validate()));
    counts.insert(a.mesh.face_count());
    names.insert(a.name);
    EXPECT_GE(a.mesh.min_corner().z(), 0.0) << a.name;
    EXPECT_LT(a.mesh.min_corner().z(), 1.0) << a.name;
  }
  EXPECT_EQ(counts.size(), 4u);
  EXPECT_EQ(names, (std::set<std::string>{"panels", "tank", "hall", "transformer"}));
}

TEST(Archetypes, PanelWeightIsQuarter) {
  for (const auto& a : builtin_archetypes()) {
    EXPECT_EQ(a.default_weight, a.name == "panels" ? 0.25 : 1.0) << a.name;
  }
}

TEST(Archetypes, NormalsPointOutward) {
  // Every face normal points away from the vertical axis or up. Only holds
  // for the single-body archetypes.
  for (const auto& a : builtin_archetypes()) {
    if (a.name != "tank" && a.name != "hall") continue;
    const Vec3 c = 0.5 * (a.mesh.min_corner() + a.mesh.max_corner());
    std::size_t outward = 0;
    for (std::size_t f = 0; f < a.mesh.face_count(); ++f) {
      Vec3 d = a.mesh.centroid(f) - c;
      d.z() = 0;
      const Vec3& n = a.mesh.normal(f);
      if (n.z() > 0.5 || n.dot(d) > 0) ++outward;
    }
    EXPECT_EQ(outward, a.mesh.face_count()) << a.name;
  }
}

TEST(MakeBox, NormalsPointOutward) {
  const TriMesh b = make_box(6, 3, 2, 1, Vec3(10, 5, 0));
  const Vec3 c(10, 5, 1);
  for (std::size_t f = 0; f < b.face_count(); ++f) {
    EXPECT_GT(b.normal(f).dot(b.centroid(f) - c), 0.0) << f;
  }
}

TEST(MakeBox, FaceCountAndArea) {
  const TriMesh b = make_box(4, 2, 2, 1);
  // Sides 2*(4*2) + 2*(2*2) cells, top 4*2, two triangles each.
  EXPECT_EQ(b.face_count(), 2u * (16 + 8 + 8));
  EXPECT_NEAR(b.total_area(), 2 * 8 + 2 * 4 + 8, 1e-9);
}

TEST(GenerateScenario, EightInStandardArea) {
  Rng rng(1);
  const Scenario sc = generate_scenario(builtin_archetypes(), 8, AreaBounds{200, 200, 50}, 5.0, rng);
  EXPECT_EQ(sc.structures.size(), 8u);
  expect_valid_placement(sc, 5.0);
  EXPECT_EQ(placement_violation(sc, 5.0), "");
  EXPECT_NO_THROW(sc.validate());
}

TEST(GenerateScenario, SingleStructure) {
  Rng rng(2);
  const Scenario sc = generate_scenario(builtin_archetypes(), 1, AreaBounds{}, 5.0, rng);
  EXPECT_EQ(sc.structures.size(), 1u);
  expect_valid_placement(sc, 5.0);
}

TEST(GenerateScenario, AbsurdDensityFails) {
  const std::vector<Archetype> big{{"block", make_box(50, 50, 10, 25), 1.0}};
  Rng rng(3);
  EXPECT_THROW(generate_scenario(big, 64, AreaBounds{100, 100, 50}, 1.0, rng), PlacementError);
}

TEST(GenerateScenario, DeterministicPerSeed) {
  Rng a(9), b(9), c(10);
  const auto arch = builtin_archetypes();
  const Scenario x = generate_scenario(arch, 16, AreaBounds{}, 5.0, a);
  const Scenario y = generate_scenario(arch, 16, AreaBounds{}, 5.0, b);
  const Scenario z = generate_scenario(arch, 16, AreaBounds{}, 5.0, c);
  EXPECT_EQ(x, y);
  EXPECT_NE(x, z);
}

TEST(GenerateScenario, ManySeedsStayValid) {
  const auto arch = builtin_archetypes();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (std::size_t n : {8u, 16u, 32u}) {
      Rng rng(seed);
      const Scenario sc = generate_scenario(arch, n, AreaBounds{}, 5.0, rng);
      ASSERT_EQ(sc.structures.size(), n);
      expect_valid_placement(sc, 5.0);
    }
  }
}

TEST(PlacementViolation, DetectsOverlapAndOutOfBounds) {
  Scenario sc;
  const TriMesh box = make_box(10, 10, 5, 5);
  sc.structures.push_back({"a", box.transformed(Pose(20, 20, 0, 0)), 1.0});
  sc.structures.push_back({"b", box.transformed(Pose(32, 20, 0, 0)), 1.0});
  EXPECT_EQ(placement_violation(sc, 1.0), "");
  EXPECT_NE(placement_violation(sc, 5.0), "");
  sc.structures[1].mesh = box.transformed(Pose(198, 20, 0, 0));
  EXPECT_NE(placement_violation(sc, 1.0), "");
}

TEST(MeanPairwiseDistance, TwoAndThreeStructures) {
  Scenario sc;
  const TriMesh box = make_box(2, 2, 2, 2);
  sc.structures.push_back({"a", box.transformed(Pose(10, 10, 0, 0)), 1.0});
  sc.structures.push_back({"b", box.transformed(Pose(13, 14, 0, 0)), 1.0});
  EXPECT_NEAR(mean_pairwise_distance(sc), 5.0, 1e-12);
  sc.structures.push_back({"c", box.transformed(Pose(10, 14, 0, 0)), 1.0});
  EXPECT_NEAR(mean_pairwise_distance(sc), (5.0 + 4.0 + 3.0) / 3.0, 1e-12);
}

TEST(Scenario, ValidateRejectsDuplicateIds) {
  Scenario sc;
  const TriMesh box = make_box(2, 2, 2, 2);
  sc.structures.push_back({"a", box, 1.0});
  sc.structures.push_back({"a", box, 1.0});
  EXPECT_THROW(sc.validate(), std::invalid_argument);
}
