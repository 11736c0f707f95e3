#include <filesystem>

#include <gtest/gtest.h>

#include "json.hpp"

#include "disip/io.hpp"
#include "disip/motion.hpp"
#include "fixtures.hpp"

using namespace disip;
namespace fs = std::filesystem;

namespace {

Scenario sample_scenario(std::uint64_t seed = 1, std::size_t n = 6) {
  Rng rng(seed);
  Scenario sc = generate_scenario(builtin_archetypes(), n, AreaBounds{}, 5.0, rng);
  sc.mission.rng_seed = seed;
  return sc;
}

// Removes the member addressed by a JSON pointer such as "/vehicle/v_inspect".
std::string erase_field(const std::string& text, const std::string& pointer) {
  auto doc = nlohmann::ordered_json::parse(text);
  const nlohmann::ordered_json::json_pointer ptr(pointer);
  doc.at(ptr.parent_pointer()).erase(ptr.back());
  return doc.dump(1);
}

}  // namespace

TEST(ScenarioIo, RoundTrip) {
  const Scenario sc = sample_scenario();
  const std::string text = io::scenario_to_text(sc);
  const Scenario back = io::scenario_from_text(text);
  EXPECT_EQ(back, sc);
  EXPECT_EQ(io::scenario_to_text(back), text);
}

TEST(ScenarioIo, FileRoundTrip) {
  const fs::path dir = fs::temp_directory_path() / "disip_io_test";
  fs::remove_all(dir);
  const Scenario sc = sample_scenario(3, 3);
  io::write_scenario(dir / "s.json", sc);
  EXPECT_EQ(io::read_scenario(dir / "s.json"), sc);
  fs::remove_all(dir);
}

TEST(ScenarioIo, MissingFieldIsNamed) {
  const std::string text = io::scenario_to_text(sample_scenario(1, 1));
  try {
    io::scenario_from_text(erase_field(text, "/vehicle/v_inspect"));
    FAIL() << "expected SchemaError";
  } catch (const io::SchemaError& e) {
    EXPECT_EQ(std::string(e.what()), "vehicle.v_inspect: missing field");
  }
  try {
    io::scenario_from_text(erase_field(text, "/structures/0/weight"));
    FAIL() << "expected SchemaError";
  } catch (const io::SchemaError& e) {
    EXPECT_EQ(std::string(e.what()), "structures[0].weight: missing field");
  }
}

TEST(ScenarioIo, TruncatedDocumentIsSchemaError) {
  const std::string text = io::scenario_to_text(sample_scenario(1, 2));
  EXPECT_THROW(io::scenario_from_text(text.substr(0, text.size() / 2)), io::SchemaError);
}

TEST(ScenarioIo, WrongSchemaTag) {
  std::string text = io::scenario_to_text(sample_scenario(1, 1));
  text.replace(text.find("disip.scenario/1"), 16, "disip.scenario/9");
  EXPECT_THROW(io::scenario_from_text(text), io::SchemaError);
}

TEST(ScenarioIo, DegenerateFaceRejectedAtLoad) {
  const std::string text = R"({"schema":"disip.scenario/1",
    "area_bounds":{"dx":10,"dy":10,"dz":10},
    "vehicle":{"v_travel":3,"v_inspect":1,"yaw_rate_max":0.5},
    "sensor":{"fov_h":1,"fov_v":1,"range_min":1,"range_max":15,"camera_pitch":0},
    "mission":{"t_max":100,"closed_route":true,"iterations":3,"rng_seed":1},
    "structures":[{"id":"a","weight":1,"mesh":{"vertices":[[0,0,0],[1,0,0],[2,0,0]],"faces":[[0,1,2]]}}]})";
  try {
    io::scenario_from_text(text);
    FAIL();
  } catch (const io::SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("structures[0].mesh"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("degenerate"), std::string::npos) << e.what();
  }
}

TEST(ScenarioIo, PoseIsBakedIntoVertices) {
  const std::string text = R"({"schema":"disip.scenario/1",
    "area_bounds":{"dx":100,"dy":100,"dz":10},
    "vehicle":{"v_travel":3,"v_inspect":1,"yaw_rate_max":0.5},
    "sensor":{"fov_h":1,"fov_v":1,"range_min":1,"range_max":15,"camera_pitch":0},
    "mission":{"t_max":100,"closed_route":true,"iterations":3,"rng_seed":1},
    "structures":[{"id":"a","weight":1,"pose":{"x":10,"y":20,"z":0,"psi":1.5707963267948966},
      "mesh":{"vertices":[[1,0,0],[0,1,0],[0,0,1]],"faces":[[0,1,2]]}}]})";
  const Scenario sc = io::scenario_from_text(text);
  const auto& v = sc.structures[0].mesh.vertices();
  EXPECT_NEAR(v[0].x(), 10.0, 1e-12);
  EXPECT_NEAR(v[0].y(), 21.0, 1e-12);
  EXPECT_NEAR(v[1].x(), 9.0, 1e-12);
  EXPECT_NE(io::scenario_to_text(sc).find("\"vertices\""), std::string::npos);
  EXPECT_EQ(io::scenario_to_text(sc).find("\"pose\""), std::string::npos);
}

TEST(CoveragePathIo, RoundTripThroughIngest) {
  const Scenario sc = sample_scenario(2, 4);
  const auto paths = cover_scenario(sc, 2);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const std::string text = io::coverage_path_to_text(paths[i]);
    const IngestResult r =
        io::coverage_path_from_text(text, sc.structures[i].mesh.face_count(), sc.vehicle);
    EXPECT_TRUE(r.warnings.empty());
    EXPECT_EQ(r.path, paths[i]);
    EXPECT_EQ(io::coverage_path_to_text(r.path), text);
  }
  EXPECT_EQ(io::coverage_file_name("s03_tank"), fs::path("coverage_s03_tank.json"));
}

TEST(CoveragePathIo, FaceOutOfRangeRejected) {
  const Scenario sc = sample_scenario(2, 1);
  const auto paths = cover_scenario(sc, 2);
  const std::string text = io::coverage_path_to_text(paths[0]);
  try {
    io::coverage_path_from_text(text, 3, sc.vehicle);
    FAIL() << "accepted out-of-range face";
  } catch (const io::SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("but the mesh has 3 faces"), std::string::npos) << e.what();
    EXPECT_NE(e.what()[0], ':');
  }
}

TEST(PlanIo, RoundTripAndRevalidation) {
  for (bool closed : {true, false}) {
    Scenario sc = sample_scenario(4, 8);
    sc.mission.closed_route = closed;
    const auto paths = cover_scenario(sc, 4);
    const RunResult r = run_planner(sc, paths, sc.mission);
    const io::PlanFile plan = io::make_plan_file(r, sc, paths, sc.mission);
    const std::string text = io::plan_to_text(plan);
    const io::PlanFile back = io::plan_from_text(text);
    EXPECT_EQ(back, plan);
    EXPECT_EQ(io::plan_to_text(back), text);

    const io::PlanCheck check = io::validate_plan(back, sc);
    EXPECT_TRUE(check.ok) << check.error;
    EXPECT_LE(check.retimed_duration, sc.mission.t_max + 1e-6);
    EXPECT_NEAR(check.retimed_duration, back.total_time, 1e-6);
    EXPECT_EQ(back.tour.size(), r.best.visits.size());
    EXPECT_EQ(back.closed_route, closed);
  }
}

TEST(PlanIo, TamperedTimingDetected) {
  const Scenario sc = sample_scenario(4, 5);
  const auto paths = cover_scenario(sc, 4);
  const RunResult r = run_planner(sc, paths, sc.mission);
  io::PlanFile plan = io::make_plan_file(r, sc, paths, sc.mission);
  ASSERT_GT(plan.path.samples.size(), 2u);
  plan.path.samples[1].time -= 0.01;
  EXPECT_FALSE(io::validate_plan(plan, sc).ok);
}

TEST(PlanIo, OverBudgetDetected) {
  const Scenario sc = sample_scenario(4, 5);
  const auto paths = cover_scenario(sc, 4);
  const RunResult r = run_planner(sc, paths, sc.mission);
  io::PlanFile plan = io::make_plan_file(r, sc, paths, sc.mission);
  plan.t_max = plan.total_time * 0.5;
  const auto check = io::validate_plan(plan, sc);
  EXPECT_FALSE(check.ok);
  EXPECT_NE(check.error.find("t_max"), std::string::npos);
}

TEST(PlanIo, MissingFieldIsNamed) {
  const Scenario sc = sample_scenario(4, 3);
  const auto paths = cover_scenario(sc, 4);
  const RunResult r = run_planner(sc, paths, sc.mission);
  const std::string text = io::plan_to_text(io::make_plan_file(r, sc, paths, sc.mission));
  try {
    io::plan_from_text(erase_field(text, "/tour_cost"));
    FAIL();
  } catch (const io::SchemaError& e) {
    EXPECT_EQ(std::string(e.what()), "tour_cost: missing field");
  }
}
