// disip: scenario generation, single-structure coverage, multi-structure
// planning and batch statistics.
//
// Exit status: 0 success, 2 usage error, 3 infeasible / placement failure /
// planning failure, 1 anything else.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "disip/io.hpp"
#include "disip/planner.hpp"
#include "disip/scenario.hpp"
#include "disip/ssip.hpp"
#include "disip/stats.hpp"

namespace fs = std::filesystem;
using namespace disip;

namespace {

constexpr int kUsage = 2;
constexpr int kInfeasible = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenArgs {
  std::size_t count = 8;
  std::vector<double> bounds{200.0, 200.0, 50.0};
  std::uint64_t seed = 1;
  double margin = 5.0;
  std::vector<std::string> archetypes;
  fs::path out = "scenario.json";
};

struct CoverArgs {
  fs::path scenario;
  fs::path out_dir = ".";
  std::uint64_t seed = 1;
};

struct PlanArgs {
  fs::path scenario;
  fs::path coverage_dir;
  fs::path out_dir = ".";
  std::optional<double> t_max;
  std::optional<std::uint32_t> iterations;
  std::optional<std::uint64_t> seed;
  std::optional<double> inclusion_prob;
  bool open_route = false;
  bool closed_route = false;
};

struct BatchArgs {
  fs::path protocol;
  fs::path out_dir = ".";
  unsigned jobs = 1;
};

std::vector<Archetype> select_archetypes(const std::vector<std::string>& names) {
  std::vector<Archetype> all = builtin_archetypes();
  if (names.empty()) return all;
  std::vector<Archetype> chosen;
  for (const auto& name : names) {
    auto it = std::find_if(all.begin(), all.end(), [&](const Archetype& a) { return a.name == name; });
    if (it == all.end()) throw UsageError("unknown archetype '" + name + "'");
    chosen.push_back(*it);
  }
  return chosen;
}

int cmd_gen(const GenArgs& a) {
  if (a.count == 0) throw UsageError("--count must be at least 1");
  const AreaBounds bounds{a.bounds[0], a.bounds[1], a.bounds[2]};
  if (!(bounds.dx > 0 && bounds.dy > 0 && bounds.dz > 0)) {
    throw UsageError("--bounds must be positive");
  }
  if (!(a.margin >= 0)) throw UsageError("--margin must be non-negative");
  Rng rng(a.seed);
  const Scenario scenario = generate_scenario(select_archetypes(a.archetypes), a.count, bounds,
                                              a.margin, rng);
  io::write_scenario(a.out, scenario);
  std::cout << "wrote " << a.out.string() << " (" << scenario.structures.size()
            << " structures)\n";
  return 0;
}

// Faces for which some admissible viewpoint exists, computed without the
// path, so the written file can be checked against it.
std::set<std::uint32_t> coverable_set(const Structure& s, const SensorConfig& sensor) {
  std::set<std::uint32_t> out;
  for (std::size_t f = 0; f < s.mesh.face_count(); ++f) {
    if (synthesize_viewpoint(s.mesh, f, sensor)) out.insert(static_cast<std::uint32_t>(f));
  }
  return out;
}

int cmd_cover(const CoverArgs& a) {
  const Scenario scenario = io::read_scenario(a.scenario);
  fs::create_directories(a.out_dir);
  const std::vector<CoveragePath> paths = cover_scenario(scenario, a.seed);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Structure& s = scenario.structures[i];
    const auto file = a.out_dir / io::coverage_file_name(s.id);
    io::write_text(file, io::coverage_path_to_text(paths[i]));

    // Round trip through the ingestion path and confirm completeness.
    const IngestResult back =
        io::coverage_path_from_text(io::read_text(file), s.mesh.face_count(), scenario.vehicle);
    const auto got = back.path.coverable_faces();
    const std::set<std::uint32_t> want = coverable_set(s, scenario.sensor);
    if (std::set<std::uint32_t>(got.begin(), got.end()) != want) {
      throw std::runtime_error("coverage of '" + s.id + "' is incomplete");
    }
    std::printf("%s: %zu viewpoints, %zu/%zu faces, %.1f s\n", s.id.c_str(), paths[i].size(),
                want.size(), s.mesh.face_count(), paths[i].total_duration);
  }
  return 0;
}

int cmd_plan(const PlanArgs& a) {
  Scenario scenario = io::read_scenario(a.scenario);
  MissionConfig& m = scenario.mission;
  if (a.t_max) m.t_max = *a.t_max;
  if (a.iterations) m.iterations = *a.iterations;
  if (a.seed) m.rng_seed = *a.seed;
  if (a.inclusion_prob) m.inclusion_probability = *a.inclusion_prob;
  if (a.open_route) m.closed_route = false;
  if (a.closed_route) m.closed_route = true;
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::vector<CoveragePath> paths;
  for (const auto& s : scenario.structures) {
    const auto file = a.coverage_dir / io::coverage_file_name(s.id);
    IngestResult in = io::coverage_path_from_text(io::read_text(file), s.mesh.face_count(),
                                                  scenario.vehicle);
    for (const auto& w : in.warnings) std::cerr << "warning: " << file.string() << ": " << w << '\n';
    if (in.path.structure_id != s.id) {
      throw io::SchemaError(file.string() + ": structure_id '" + in.path.structure_id +
                            "' does not match '" + s.id + "'");
    }
    paths.push_back(std::move(in.path));
  }

  fs::create_directories(a.out_dir);
  RunResult result;
  try {
    result = run_planner(scenario, paths, m);
  } catch (const NoFeasiblePlan& e) {
    std::cerr << "no feasible plan: " << e.what() << '\n';
    return kInfeasible;
  }
  const RunReport report = make_report(result, scenario, paths, m);
  io::write_text(a.out_dir / "plan.json",
                 io::plan_to_text(io::make_plan_file(result, scenario, paths, m)));
  io::write_text(a.out_dir / "report.json", report_to_text(report));
  emit_plot_data(a.out_dir, report, result.history);

  std::printf("best iteration %zu of %zu: reward %.3f (%.1f%% of available), time %.1f / %.1f s\n",
              report.best_iteration, report.iterations, report.total_reward,
              report.reward_percent, report.total_time, report.t_max);
  std::printf("visited %.1f%% of structures, coverage %.1f%%, tsp share of step time %.2f\n",
              report.visited_percent, report.coverage_percent, tsp_time_share(result.history));
  return 0;
}

int cmd_batch(const BatchArgs& a) {
  BatchProtocol protocol;
  try {
    protocol = protocol_from_text(io::read_text(a.protocol));
  } catch (const io::SchemaError& e) {
    throw UsageError(e.what());
  }
  std::size_t runs = 0;
  for (const auto& c : protocol.cases) runs += c.seeds.size();
  if (runs == 0) throw UsageError("batch protocol is empty");

  const unsigned jobs = a.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : a.jobs;
  const BatchResult result = run_batch(protocol, jobs);
  fs::create_directories(a.out_dir);
  io::write_text(a.out_dir / "batch_coverage.csv", batch_coverage_csv(result));
  io::write_text(a.out_dir / "batch_timing.csv", batch_timing_csv(result));
  std::cout << batch_coverage_csv(result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-structure inspection planning"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a random scenario");
  g->add_option("--count", gen.count, "number of structures")->capture_default_str();
  g->add_option("--bounds", gen.bounds, "area extent dx dy dz [m]")->expected(3)->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--margin", gen.margin, "minimum footprint clearance [m]")->capture_default_str();
  g->add_option("--archetypes", gen.archetypes, "subset of panels,tank,hall,transformer")
      ->delimiter(',');
  g->add_option("--out", gen.out)->capture_default_str();

  CoverArgs cover;
  auto* c = app.add_subcommand("cover", "compute a coverage path per structure");
  c->add_option("--scenario", cover.scenario)->required()->check(CLI::ExistingFile);
  c->add_option("--out-dir", cover.out_dir)->capture_default_str();
  c->add_option("--seed", cover.seed)->capture_default_str();

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "plan a budgeted multi-structure route");
  p->add_option("--scenario", plan.scenario)->required()->check(CLI::ExistingFile);
  p->add_option("--coverage-dir", plan.coverage_dir)->required()->check(CLI::ExistingDirectory);
  p->add_option("--out-dir", plan.out_dir)->capture_default_str();
  p->add_option("--t-max", plan.t_max, "mission time budget [s]");
  p->add_option("--iterations", plan.iterations);
  p->add_option("--seed", plan.seed);
  p->add_option("--inclusion-prob", plan.inclusion_prob, "subset inclusion probability");
  auto* open_flag = p->add_flag("--open-route", plan.open_route, "omit the return leg");
  p->add_flag("--closed-route", plan.closed_route, "return to the start")->excludes(open_flag);

  BatchArgs batch;
  auto* b = app.add_subcommand("batch", "run a protocol of repeated experiments");
  b->add_option("--protocol", batch.protocol)->required()->check(CLI::ExistingFile);
  b->add_option("--out-dir", batch.out_dir)->capture_default_str();
  b->add_option("--jobs", batch.jobs, "worker threads, 0 = all cores")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (c->parsed()) return cmd_cover(cover);
    if (p->parsed()) return cmd_plan(plan);
    if (b->parsed()) return cmd_batch(batch);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PlacementError& e) {
    std::cerr << "placement failed: " << e.what() << '\n';
    return kInfeasible;
  } catch (const PlanningError& e) {
    std::cerr << "planning failed: " << e.what() << '\n';
    return kInfeasible;
  } catch (const io::SchemaError& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
