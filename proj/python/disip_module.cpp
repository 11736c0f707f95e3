// Python bindings. Meshes and poses cross the boundary as plain lists and
// tuples; files and JSON text go through the same readers and writers as
// the command-line tool.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "disip/io.hpp"
#include "disip/motion.hpp"
#include "disip/planner.hpp"
#include "disip/scenario.hpp"
#include "disip/ssip.hpp"
#include "disip/stats.hpp"
#include "disip/tsp.hpp"

namespace py = pybind11;
using namespace disip;

namespace {

using Triple = std::array<double, 3>;

TriMesh mesh_from_lists(const std::vector<Triple>& vertices, const std::vector<Face>& faces) {
  std::vector<Vec3> v;
  v.reserve(vertices.size());
  for (const auto& p : vertices) v.emplace_back(p[0], p[1], p[2]);
  return TriMesh(std::move(v), faces);
}

Triple to_triple(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

CostMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw std::invalid_argument("cost matrix must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return CostMatrix(n, std::move(flat));
}

py::dict history_row(const IterationRecord& r) {
  py::dict d;
  d["iteration"] = r.iteration;
  d["feasible"] = r.feasible;
  d["total_reward"] = r.total_reward;
  d["total_time"] = r.total_time;
  d["tour_cost"] = r.tour_cost;
  d["sampled_count"] = r.sampled_count;
  d["tsp_seconds"] = r.timings.tsp;
  d["total_seconds"] = r.timings.total;
  return d;
}

}  // namespace

PYBIND11_MODULE(disip, m) {
  m.doc() = "Budgeted multi-structure inspection planning";

  py::register_exception<PlanningError>(m, "PlanningError", PyExc_RuntimeError);
  py::register_exception<PlacementError>(m, "PlacementError", PyExc_RuntimeError);
  py::register_exception<NoFeasiblePlan>(m, "NoFeasiblePlan", PyExc_RuntimeError);
  py::register_exception<io::SchemaError>(m, "SchemaError", PyExc_ValueError);

  py::class_<Pose>(m, "Pose")
      .def(py::init<>())
      .def(py::init<double, double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"),
           py::arg("psi") = 0.0)
      .def_readwrite("x", &Pose::x)
      .def_readwrite("y", &Pose::y)
      .def_readwrite("z", &Pose::z)
      .def_readwrite("psi", &Pose::psi)
      .def(py::self == py::self)
      .def("__repr__", [](const Pose& p) {
        return "Pose(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " +
               std::to_string(p.z) + ", " + std::to_string(p.psi) + ")";
      });

  m.def("normalize_yaw", &normalize_yaw, py::arg("psi"));
  m.def("angular_distance", &angular_distance, py::arg("a"), py::arg("b"));
  m.def("distance", &distance, py::arg("a"), py::arg("b"));
  m.def("interpolate", &interpolate, py::arg("start"), py::arg("end"), py::arg("s"));
  m.def("travel_time", &travel_time, py::arg("start"), py::arg("end"), py::arg("speed"),
        py::arg("yaw_rate_max"));

  py::class_<VehicleConfig>(m, "VehicleConfig")
      .def(py::init<>())
      .def_readwrite("v_travel", &VehicleConfig::v_travel)
      .def_readwrite("v_inspect", &VehicleConfig::v_inspect)
      .def_readwrite("yaw_rate_max", &VehicleConfig::yaw_rate_max)
      .def("validate", &VehicleConfig::validate);

  py::class_<SensorConfig>(m, "SensorConfig")
      .def(py::init<>())
      .def_readwrite("fov_h", &SensorConfig::fov_h)
      .def_readwrite("fov_v", &SensorConfig::fov_v)
      .def_readwrite("range_min", &SensorConfig::range_min)
      .def_readwrite("range_max", &SensorConfig::range_max)
      .def_readwrite("camera_pitch", &SensorConfig::camera_pitch)
      .def_readwrite("incidence_max", &SensorConfig::incidence_max)
      .def("validate", &SensorConfig::validate);

  py::class_<MissionConfig>(m, "MissionConfig")
      .def(py::init<>())
      .def_readwrite("t_max", &MissionConfig::t_max)
      .def_readwrite("closed_route", &MissionConfig::closed_route)
      .def_readwrite("iterations", &MissionConfig::iterations)
      .def_readwrite("rng_seed", &MissionConfig::rng_seed)
      .def_readwrite("inclusion_probability", &MissionConfig::inclusion_probability)
      .def("validate", &MissionConfig::validate);

  py::class_<AreaBounds>(m, "AreaBounds")
      .def(py::init<>())
      .def(py::init<double, double, double>(), py::arg("dx"), py::arg("dy"), py::arg("dz"))
      .def_readwrite("dx", &AreaBounds::dx)
      .def_readwrite("dy", &AreaBounds::dy)
      .def_readwrite("dz", &AreaBounds::dz);

  py::class_<TriMesh>(m, "TriMesh")
      .def(py::init(&mesh_from_lists), py::arg("vertices"), py::arg("faces"))
      .def_property_readonly("vertices",
                             [](const TriMesh& t) {
                               std::vector<Triple> out;
                               for (const auto& v : t.vertices()) out.push_back(to_triple(v));
                               return out;
                             })
      .def_property_readonly("faces", &TriMesh::faces)
      .def_property_readonly("face_count", &TriMesh::face_count)
      .def_property_readonly("total_area", &TriMesh::total_area)
      .def("face_area", &TriMesh::face_area)
      .def("normal", [](const TriMesh& t, std::size_t f) { return to_triple(t.normal(f)); })
      .def("centroid", [](const TriMesh& t, std::size_t f) { return to_triple(t.centroid(f)); })
      .def("transformed", &TriMesh::transformed, py::arg("pose"));

  py::class_<Structure>(m, "Structure")
      .def(py::init([](std::string id, TriMesh mesh, double weight) {
             return Structure{std::move(id), std::move(mesh), weight};
           }),
           py::arg("id"), py::arg("mesh"), py::arg("weight") = 1.0)
      .def_readwrite("id", &Structure::id)
      .def_readwrite("mesh", &Structure::mesh)
      .def_readwrite("weight", &Structure::weight);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("structures", &Scenario::structures)
      .def_readwrite("bounds", &Scenario::bounds)
      .def_readwrite("vehicle", &Scenario::vehicle)
      .def_readwrite("sensor", &Scenario::sensor)
      .def_readwrite("mission", &Scenario::mission)
      .def("validate", &Scenario::validate);

  py::class_<Archetype>(m, "Archetype")
      .def_readonly("name", &Archetype::name)
      .def_readonly("mesh", &Archetype::mesh)
      .def_readonly("default_weight", &Archetype::default_weight);

  m.def("archetypes", &builtin_archetypes);
  m.def(
      "generate_scenario",
      [](std::size_t count, const AreaBounds& bounds, double margin, std::uint64_t seed,
         std::optional<std::vector<std::string>> names) {
        std::vector<Archetype> all = builtin_archetypes();
        if (names) {
          std::vector<Archetype> chosen;
          for (const auto& n : *names) {
            auto it = std::find_if(all.begin(), all.end(), [&](const Archetype& a) { return a.name == n; });
            if (it == all.end()) throw std::invalid_argument("unknown archetype '" + n + "'");
            chosen.push_back(*it);
          }
          all = std::move(chosen);
        }
        Rng rng(seed);
        return generate_scenario(all, count, bounds, margin, rng);
      },
      py::arg("count"), py::arg("bounds") = AreaBounds{}, py::arg("margin") = 5.0,
      py::arg("seed") = 1, py::arg("archetypes") = py::none());
  m.def("placement_violation", &placement_violation, py::arg("scenario"), py::arg("margin"));
  m.def("mean_pairwise_distance", &mean_pairwise_distance, py::arg("scenario"));

  py::class_<Viewpoint>(m, "Viewpoint")
      .def_readonly("pose", &Viewpoint::pose)
      .def_readonly("generating_face", &Viewpoint::generating_face)
      .def_readonly("covered_faces", &Viewpoint::covered_faces);

  py::class_<CoveragePath>(m, "CoveragePath")
      .def_readonly("structure_id", &CoveragePath::structure_id)
      .def_readonly("points", &CoveragePath::points)
      .def_readonly("cumulative_times", &CoveragePath::cumulative_times)
      .def_readonly("total_duration", &CoveragePath::total_duration)
      .def_readonly("is_cycle", &CoveragePath::is_cycle)
      .def("__len__", &CoveragePath::size)
      .def("coverable_faces", &CoveragePath::coverable_faces);

  m.def("visible_faces", &visible_faces, py::arg("pose"), py::arg("mesh"), py::arg("sensor"));
  m.def("synthesize_viewpoint", &synthesize_viewpoint, py::arg("mesh"), py::arg("face"),
        py::arg("sensor"));
  m.def("plan_coverage", &plan_coverage, py::arg("structure"), py::arg("sensor"),
        py::arg("vehicle"), py::arg("seed") = 1);
  m.def("cover_scenario", &cover_scenario, py::arg("scenario"), py::arg("seed") = 1);

  m.def(
      "solve_tsp",
      [](const std::vector<std::vector<double>>& costs, bool closed, std::uint64_t seed) {
        const Tour t = solve_tsp(matrix_from_rows(costs), closed, seed);
        return py::make_tuple(t.order, t.cost);
      },
      py::arg("costs"), py::arg("closed") = true, py::arg("seed") = 1,
      "Returns (order, cost) for a square matrix of travel costs.");
  m.def(
      "brute_force_tsp",
      [](const std::vector<std::vector<double>>& costs, bool closed) {
        const Tour t = brute_force_tsp(matrix_from_rows(costs), closed);
        return py::make_tuple(t.order, t.cost);
      },
      py::arg("costs"), py::arg("closed") = true);

  m.def("scale_inspection_times",
        [](const std::vector<double>& raw, const std::vector<double>& caps, double budget) {
          return scale_inspection_times(raw, caps, budget);
        },
        py::arg("raw"), py::arg("caps"), py::arg("budget"));

  py::class_<CoverageGain>(m, "CoverageGain")
      .def_readonly("covered_area", &CoverageGain::covered_area)
      .def_readonly("ratio", &CoverageGain::ratio)
      .def_readonly("reward", &CoverageGain::reward);

  m.def(
      "subpath_reward",
      [](const Structure& s, const CoveragePath& path, std::size_t entry, double duration) {
        return compute_reward(s, path, extract_subpath(path, entry, duration));
      },
      py::arg("structure"), py::arg("path"), py::arg("entry_index"), py::arg("duration"),
      "Reward of flying `path` from `entry_index` for `duration` seconds.");

  py::class_<RunResult>(m, "RunResult")
      .def_property_readonly("total_reward", [](const RunResult& r) { return r.best.total_reward; })
      .def_property_readonly("total_time", [](const RunResult& r) { return r.best.total_time; })
      .def_property_readonly("tour_cost", [](const RunResult& r) { return r.best.tour.cost; })
      .def_readonly("best_iteration", &RunResult::best_iteration)
      .def_property_readonly("visits",
                             [](const RunResult& r) {
                               py::list out;
                               for (std::size_t k : r.best.tour.order) {
                                 const StructureVisit& v = r.best.visits[k];
                                 py::dict d;
                                 d["structure"] = v.structure;
                                 d["entry_index"] = v.entry_index;
                                 d["inspection_time"] = v.inspection_time;
                                 d["covered_area"] = v.gain.covered_area;
                                 d["coverage_ratio"] = v.gain.ratio;
                                 d["reward"] = v.gain.reward;
                                 out.append(d);
                               }
                               return out;
                             })
      .def_property_readonly("history", [](const RunResult& r) {
        py::list out;
        for (const auto& h : r.history) out.append(history_row(h));
        return out;
      });

  m.def(
      "run_planner",
      [](const Scenario& sc, const std::vector<CoveragePath>& paths,
         std::optional<MissionConfig> mission) {
        py::gil_scoped_release release;
        return run_planner(sc, paths, mission.value_or(sc.mission));
      },
      py::arg("scenario"), py::arg("paths"), py::arg("mission") = py::none());
  m.def("best_reward_trace",
        [](const RunResult& r) { return best_reward_trace(r.history); }, py::arg("result"));

  m.def(
      "report_json",
      [](const RunResult& r, const Scenario& sc, const std::vector<CoveragePath>& paths,
         std::optional<MissionConfig> mission) {
        return report_to_text(make_report(r, sc, paths, mission.value_or(sc.mission)));
      },
      py::arg("result"), py::arg("scenario"), py::arg("paths"), py::arg("mission") = py::none());
  m.def(
      "plan_json",
      [](const RunResult& r, const Scenario& sc, const std::vector<CoveragePath>& paths,
         std::optional<MissionConfig> mission) {
        return io::plan_to_text(io::make_plan_file(r, sc, paths, mission.value_or(sc.mission)));
      },
      py::arg("result"), py::arg("scenario"), py::arg("paths"), py::arg("mission") = py::none());
  m.def(
      "validate_plan_json",
      [](const std::string& text, const Scenario& sc) {
        const io::PlanCheck c = io::validate_plan(io::plan_from_text(text), sc);
        return py::make_tuple(c.ok, c.retimed_duration, c.error);
      },
      py::arg("text"), py::arg("scenario"), "Returns (ok, retimed_duration, error).");

  m.def("scenario_to_json", &io::scenario_to_text, py::arg("scenario"));
  m.def("scenario_from_json", &io::scenario_from_text, py::arg("text"));
  m.def("read_scenario", &io::read_scenario, py::arg("path"));
  m.def("write_scenario", &io::write_scenario, py::arg("path"), py::arg("scenario"));
  m.def("coverage_path_to_json", &io::coverage_path_to_text, py::arg("path"));
  m.def(
      "coverage_path_from_json",
      [](const std::string& text, std::size_t face_count, const VehicleConfig& vehicle) {
        IngestResult r = io::coverage_path_from_text(text, face_count, vehicle);
        return py::make_tuple(std::move(r.path), std::move(r.warnings));
      },
      py::arg("text"), py::arg("face_count"), py::arg("vehicle"),
      "Returns (path, warnings).");
}
