#include "disip/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "disip/motion.hpp"
#include "json_reader.hpp"

namespace disip::io {

using detail::Json;
using detail::Reader;

namespace {

Json pose_fields(Json j, const Pose& p) {
  j["x"] = p.x;
  j["y"] = p.y;
  j["z"] = p.z;
  j["psi"] = p.psi;
  return j;
}

Pose read_pose(const Reader& r) {
  return Pose(r["x"].number(), r["y"].number(), r["z"].number(), r["psi"].number());
}

Json faces_json(const std::vector<std::uint32_t>& faces) {
  Json arr = Json::array();
  for (auto f : faces) arr.push_back(f);
  return arr;
}

std::vector<std::uint32_t> read_faces(const Reader& r) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto v = r.at(i).unsigned_integer();
    if (v > UINT32_MAX) r.at(i).fail("face index out of range");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

const char* kind_name(SegmentKind kind) {
  return kind == SegmentKind::kTransit ? "transit" : "inspect";
}

SegmentKind read_kind(const Reader& r) {
  const std::string s = r.string();
  if (s == "transit") return SegmentKind::kTransit;
  if (s == "inspect") return SegmentKind::kInspect;
  r.fail("expected 'inspect' or 'transit'");
}

template <typename Fn>
auto with_context(const Reader& r, Fn&& fn) {
  try {
    return fn();
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(r.path().empty() ? std::string(e.what()) : r.path() + ": " + e.what());
  }
}

}  // namespace

std::string read_text(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + file.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + file.string() + "'");
  out << text;
}

// ---------------------------------------------------------------- scenario

std::string scenario_to_text(const Scenario& scenario) {
  Json j;
  j["schema"] = kScenarioSchema;
  j["area_bounds"] = {{"dx", scenario.bounds.dx}, {"dy", scenario.bounds.dy}, {"dz", scenario.bounds.dz}};
  j["vehicle"] = {{"v_travel", scenario.vehicle.v_travel},
                  {"v_inspect", scenario.vehicle.v_inspect},
                  {"yaw_rate_max", scenario.vehicle.yaw_rate_max}};
  j["sensor"] = {{"fov_h", scenario.sensor.fov_h},
                 {"fov_v", scenario.sensor.fov_v},
                 {"range_min", scenario.sensor.range_min},
                 {"range_max", scenario.sensor.range_max},
                 {"camera_pitch", scenario.sensor.camera_pitch},
                 {"incidence_max", scenario.sensor.incidence_max}};
  j["mission"] = {{"t_max", scenario.mission.t_max},
                  {"closed_route", scenario.mission.closed_route},
                  {"iterations", scenario.mission.iterations},
                  {"rng_seed", scenario.mission.rng_seed},
                  {"inclusion_probability", scenario.mission.inclusion_probability}};
  Json structures = Json::array();
  for (const auto& s : scenario.structures) {
    Json vertices = Json::array();
    for (const auto& v : s.mesh.vertices()) vertices.push_back({v.x(), v.y(), v.z()});
    Json faces = Json::array();
    for (const auto& f : s.mesh.faces()) faces.push_back({f.at(0), f.at(1), f.at(2)});
    Json js;
    js["id"] = s.id;
    js["weight"] = s.weight;
    js["mesh"] = {{"vertices", std::move(vertices)}, {"faces", std::move(faces)}};
    structures.push_back(std::move(js));
  }
  j["structures"] = std::move(structures);
  return j.dump(1) + "\n";
}

Scenario scenario_from_text(const std::string& text) {
  const Json doc = detail::parse(text);
  const Reader root(doc, "");
  root.expect_schema(kScenarioSchema);
  Scenario sc;
  const Reader b = root["area_bounds"];
  sc.bounds = {b["dx"].number(), b["dy"].number(), b["dz"].number()};
  const Reader v = root["vehicle"];
  sc.vehicle = {v["v_travel"].number(), v["v_inspect"].number(), v["yaw_rate_max"].number()};
  const Reader s = root["sensor"];
  sc.sensor.fov_h = s["fov_h"].number();
  sc.sensor.fov_v = s["fov_v"].number();
  sc.sensor.range_min = s["range_min"].number();
  sc.sensor.range_max = s["range_max"].number();
  sc.sensor.camera_pitch = s["camera_pitch"].number();
  if (s.has("incidence_max")) sc.sensor.incidence_max = s["incidence_max"].number();
  const Reader m = root["mission"];
  sc.mission.t_max = m["t_max"].number();
  sc.mission.closed_route = m["closed_route"].boolean();
  sc.mission.iterations = static_cast<std::uint32_t>(m["iterations"].unsigned_integer());
  sc.mission.rng_seed = m["rng_seed"].unsigned_integer();
  if (m.has("inclusion_probability")) {
    sc.mission.inclusion_probability = m["inclusion_probability"].number();
  }

  const Reader list = root["structures"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Reader js = list.at(i);
    Structure st;
    st.id = js["id"].string();
    st.weight = js["weight"].number();
    const Reader mesh = js["mesh"];
    const Reader verts = mesh["vertices"];
    const Reader faces = mesh["faces"];
    std::vector<Vec3> vertices;
    for (std::size_t k = 0; k < verts.size(); ++k) {
      const Reader p = verts.at(k);
      if (p.size() != 3) p.fail("expected [x, y, z]");
      vertices.emplace_back(p.at(0).number(), p.at(1).number(), p.at(2).number());
    }
    std::vector<Face> tris;
    for (std::size_t k = 0; k < faces.size(); ++k) {
      const Reader f = faces.at(k);
      if (f.size() != 3) f.fail("expected three vertex indices");
      const auto idx = read_faces(f);
      tris.push_back({idx.at(0), idx.at(1), idx.at(2)});
    }
    st.mesh = with_context(mesh, [&] { return TriMesh(std::move(vertices), std::move(tris)); });
    if (js.has("pose")) st.mesh = st.mesh.transformed(read_pose(js["pose"]));
    sc.structures.push_back(std::move(st));
  }
  with_context(root, [&] {
    sc.validate();
    return 0;
  });
  return sc;
}

void write_scenario(const std::filesystem::path& file, const Scenario& scenario) {
  write_text(file, scenario_to_text(scenario));
}

Scenario read_scenario(const std::filesystem::path& file) {
  return scenario_from_text(read_text(file));
}

// ----------------------------------------------------------- coverage path

std::string coverage_path_to_text(const CoveragePath& path) {
  Json j;
  j["schema"] = kCoveragePathSchema;
  j["structure_id"] = path.structure_id;
  j["is_cycle"] = path.is_cycle;
  j["total_duration"] = path.total_duration;
  Json points = Json::array();
  for (std::size_t k = 0; k < path.points.size(); ++k) {
    const Viewpoint& vp = path.points.at(k);
    Json p = pose_fields(Json::object(), vp.pose);
    p["cumulative_time"] = path.cumulative_times.at(k);
    p["covered_faces"] = faces_json(vp.covered_faces);
    if (vp.generating_face) p["generating_face"] = *vp.generating_face;
    points.push_back(std::move(p));
  }
  j["points"] = std::move(points);
  return j.dump(1) + "\n";
}

IngestResult coverage_path_from_text(const std::string& text, std::size_t face_count,
                                     const VehicleConfig& vehicle) {
  const Json doc = detail::parse(text);
  const Reader root(doc, "");
  root.expect_schema(kCoveragePathSchema);
  const std::string id = root["structure_id"].string();
  const bool is_cycle = root["is_cycle"].boolean();
  const Reader points = root["points"];
  std::vector<CoverageRecord> records;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Reader p = points.at(k);
    CoverageRecord rec;
    rec.pose = read_pose(p);
    rec.cumulative_time = p["cumulative_time"].number();
    rec.covered_faces = read_faces(p["covered_faces"]);
    if (p.has("generating_face")) {
      rec.generating_face = static_cast<std::uint32_t>(p["generating_face"].unsigned_integer());
    }
    records.push_back(std::move(rec));
  }
  return with_context(root, [&] {
    return ingest_coverage_path(id, records, is_cycle, face_count, vehicle);
  });
}

std::filesystem::path coverage_file_name(const std::string& structure_id) {
  return "coverage_" + structure_id + ".json";
}

// -------------------------------------------------------------------- plan

PlanFile make_plan_file(const RunResult& result, const Scenario& scenario,
                        const std::vector<CoveragePath>& paths, const MissionConfig& mission) {
  PlanFile plan;
  plan.closed_route = mission.closed_route;
  plan.t_max = mission.t_max;
  plan.best_iteration = result.best_iteration;
  plan.total_reward = result.best.total_reward;
  plan.total_time = result.best.total_time;
  plan.tour_cost = result.best.tour.cost;
  for (auto pos : result.best.tour.order) {
    const StructureVisit& v = result.best.visits.at(pos);
    const std::string& id = scenario.structures.at(v.structure).id;
    plan.tour.push_back(id);
    plan.visits.push_back({id, v.entry_index, v.inspection_time, v.available_time,
                           v.gain.covered_area, v.gain.ratio, v.gain.reward,
                           credited_faces(paths.at(v.structure), v.subpath)});
  }
  plan.path = result.path;
  return plan;
}

std::string plan_to_text(const PlanFile& plan) {
  Json j;
  j["schema"] = kPlanSchema;
  j["closed_route"] = plan.closed_route;
  j["t_max"] = plan.t_max;
  j["best_iteration"] = plan.best_iteration;
  j["total_reward"] = plan.total_reward;
  j["total_time"] = plan.total_time;
  j["tour_cost"] = plan.tour_cost;
  j["tour"] = plan.tour;
  Json visits = Json::array();
  for (const auto& v : plan.visits) {
    Json jv;
    jv["structure_id"] = v.structure_id;
    jv["entry_index"] = v.entry_index;
    jv["inspection_time"] = v.inspection_time;
    jv["available_time"] = v.available_time;
    jv["covered_area"] = v.covered_area;
    jv["coverage_ratio"] = v.coverage_ratio;
    jv["reward"] = v.reward;
    jv["credited_faces"] = faces_json(v.credited_faces);
    visits.push_back(std::move(jv));
  }
  j["visits"] = std::move(visits);
  Json samples = Json::array();
  for (const auto& s : plan.path.samples) {
    Json js = pose_fields(Json::object(), s.pose);
    js["t"] = s.time;
    js["kind"] = kind_name(s.kind);
    js["structure_id"] = s.structure_id;
    samples.push_back(std::move(js));
  }
  j["path"] = {{"total_duration", plan.path.total_duration}, {"samples", std::move(samples)}};
  return j.dump(1) + "\n";
}

PlanFile plan_from_text(const std::string& text) {
  const Json doc = detail::parse(text);
  const Reader root(doc, "");
  root.expect_schema(kPlanSchema);
  PlanFile plan;
  plan.closed_route = root["closed_route"].boolean();
  plan.t_max = root["t_max"].number();
  plan.best_iteration = root["best_iteration"].unsigned_integer();
  plan.total_reward = root["total_reward"].number();
  plan.total_time = root["total_time"].number();
  plan.tour_cost = root["tour_cost"].number();
  const Reader tour = root["tour"];
  for (std::size_t i = 0; i < tour.size(); ++i) plan.tour.push_back(tour.at(i).string());
  const Reader visits = root["visits"];
  for (std::size_t i = 0; i < visits.size(); ++i) {
    const Reader v = visits.at(i);
    plan.visits.push_back({v["structure_id"].string(), v["entry_index"].unsigned_integer(),
                           v["inspection_time"].number(), v["available_time"].number(),
                           v["covered_area"].number(), v["coverage_ratio"].number(),
                           v["reward"].number(), read_faces(v["credited_faces"])});
  }
  const Reader path = root["path"];
  plan.path.total_duration = path["total_duration"].number();
  const Reader samples = path["samples"];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Reader s = samples.at(i);
    plan.path.samples.push_back(
        {read_pose(s), s["t"].number(), read_kind(s["kind"]), s["structure_id"].string()});
  }
  return plan;
}

PlanCheck validate_plan(const PlanFile& plan, const Scenario& scenario, double tol) {
  PlanCheck check;
  const auto& samples = plan.path.samples;
  if (samples.empty()) {
    check.error = "plan path is empty";
    return check;
  }
  const VehicleConfig& vehicle = scenario.vehicle;
  double t = 0.0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double speed =
        samples.at(k).kind == SegmentKind::kTransit ? vehicle.v_travel : vehicle.v_inspect;
    const double dt = travel_time(samples[k - 1].pose, samples.at(k).pose, speed, vehicle.yaw_rate_max);
    const double stored = samples.at(k).time - samples[k - 1].time;
    if (std::abs(stored - dt) > tol) {
      std::ostringstream msg;
      msg << "segment " << k - 1 << "->" << k << " stored " << stored << " s, re-timed " << dt
          << " s";
      check.error = msg.str();
      check.retimed_duration = t;
      return check;
    }
    t += dt;
  }
  check.retimed_duration = t;
  if (std::abs(t - plan.total_time) > tol) {
    check.error = "re-timed duration differs from stored total_time";
    return check;
  }
  if (t > plan.t_max + tol) {
    check.error = "re-timed duration exceeds t_max";
    return check;
  }
  check.ok = true;
  return check;
}

}  // namespace disip::io
