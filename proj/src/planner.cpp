#include "disip/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "disip/motion.hpp"

namespace disip {

namespace {

constexpr double kTimeEps = 1e-12;
// Tolerance used when accepting a plan against the budget.
constexpr double kBudgetSlack = 1e-7;
constexpr int kMaxBudgetRepairs = 8;

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

double available_duration(const CoveragePath& path, std::size_t entry_index) {
  if (entry_index >= path.size()) throw std::out_of_range("entry index outside coverage path");
  if (path.is_cycle) return path.total_duration;
  return path.total_duration - path.cumulative_times[entry_index];
}

SubPath extract_subpath(const CoveragePath& path, std::size_t entry_index, double duration) {
  const double available = available_duration(path, entry_index);
  if (!(duration >= 0.0) || duration > available + 1e-9) {
    throw std::invalid_argument("extract_subpath: duration outside [0, available time]");
  }
  const std::size_t m = path.size();
  SubPath sub;
  sub.entry_index = entry_index;
  sub.duration = duration;
  sub.visited.push_back(entry_index);
  sub.poses.push_back(path.points[entry_index].pose);
  sub.times.push_back(0.0);

  double t = 0.0;
  std::size_t k = entry_index;
  std::size_t steps = 0;
  for (;;) {
    const bool has_next = path.is_cycle ? steps < m && m > 1 : k + 1 < m;
    if (!has_next) break;
    const double seg = path.segment_duration(k);
    const std::size_t next = (k + 1) % m;
    if (t + seg > duration + kTimeEps) {
      const double remaining = duration - t;
      if (remaining > kTimeEps) {
        sub.poses.push_back(interpolate(path.points[k].pose, path.points[next].pose,
                                        std::clamp(remaining / seg, 0.0, 1.0)));
        sub.times.push_back(duration);
        sub.interpolated_end = true;
      }
      break;
    }
    t += seg;
    k = next;
    ++steps;
    sub.visited.push_back(k);
    sub.poses.push_back(path.points[k].pose);
    sub.times.push_back(t);
  }
  return sub;
}

std::vector<std::uint32_t> credited_faces(const CoveragePath& path, const SubPath& sub) {
  std::vector<std::uint32_t> faces;
  for (auto idx : sub.visited) {
    const auto& covered = path.points.at(idx).covered_faces;
    faces.insert(faces.end(), covered.begin(), covered.end());
  }
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  return faces;
}

double coverable_area(const TriMesh& mesh, const CoveragePath& path) {
  double area = 0.0;
  for (auto f : path.coverable_faces()) area += mesh.face_area(f);
  return area;
}

CoverageGain compute_reward(const Structure& structure, const CoveragePath& path,
                            const SubPath& sub) {
  CoverageGain gain;
  for (auto f : credited_faces(path, sub)) gain.covered_area += structure.mesh.face_area(f);
  const double total = coverable_area(structure.mesh, path);
  gain.ratio = total > 0.0 ? std::min(1.0, gain.covered_area / total) : 0.0;
  gain.reward = structure.weight * gain.covered_area;
  return gain;
}

std::vector<std::size_t> sample_structure_subset(std::size_t universe, double p, Rng& rng) {
  if (universe == 0) throw std::invalid_argument("sample_structure_subset: no structures");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("inclusion probability outside (0, 1]");
  std::vector<std::size_t> subset;
  while (subset.empty()) {
    for (std::size_t i = 0; i < universe; ++i) {
      if (rng.bernoulli(p)) subset.push_back(i);
    }
  }
  return subset;
}

std::vector<double> scale_inspection_times(std::span<const double> raw,
                                           std::span<const double> caps, double budget) {
  if (raw.size() != caps.size()) throw std::invalid_argument("raw/cap size mismatch");
  if (!(budget >= 0.0)) throw std::domain_error("negative inspection budget: tour is infeasible");
  const std::size_t n = raw.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(raw[i] >= 0.0) || !(caps[i] >= 0.0)) {
      throw std::invalid_argument("inspection times must be non-negative");
    }
  }

  std::vector<double> weights(raw.begin(), raw.end());
  std::vector<double> out(n, 0.0);
  std::vector<bool> capped(n, false);
  double remaining = std::min(budget, std::accumulate(caps.begin(), caps.end(), 0.0));

  for (;;) {
    double free_weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!capped[i]) free_weight += weights[i];
    }
    if (free_weight <= 0.0) {
      // All remaining raw draws are zero: fall back to cap-proportional shares.
      for (std::size_t i = 0; i < n; ++i) {
        if (!capped[i]) weights[i] = caps[i];
      }
      free_weight = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!capped[i]) free_weight += weights[i];
      }
      if (free_weight <= 0.0) break;
    }
    const double factor = std::max(remaining, 0.0) / free_weight;
    bool any_capped = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!capped[i] && weights[i] * factor >= caps[i]) {
        capped[i] = true;
        out[i] = caps[i];
        remaining -= caps[i];
        any_capped = true;
      }
    }
    if (!any_capped) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!capped[i]) out[i] = weights[i] * factor;
      }
      break;
    }
  }
  return out;
}

std::vector<double> assign_inspection_times(std::span<const double> caps, double budget,
                                            Rng& rng) {
  if (!(budget >= 0.0)) throw std::domain_error("negative inspection budget: tour is infeasible");
  std::vector<double> raw;
  raw.reserve(caps.size());
  for (double cap : caps) raw.push_back(rng.uniform() * cap);
  return scale_inspection_times(raw, caps, budget);
}

std::optional<SampledPlan> run_iteration(const Scenario& scenario,
                                         const std::vector<CoveragePath>& paths,
                                         const MissionConfig& mission, Rng& rng,
                                         IterationRecord* record) {
  if (paths.size() != scenario.structures.size()) {
    throw std::invalid_argument("one coverage path per structure is required");
  }
  StepTimings timings;
  StopWatch total_watch;
  StopWatch watch;

  const auto subset =
      sample_structure_subset(scenario.structures.size(), mission.inclusion_probability, rng);
  const std::size_t n = subset.size();
  std::vector<StructureVisit> visits(n);
  std::vector<double> caps(n);
  std::vector<NodePoses> nodes(n);
  for (std::size_t v = 0; v < n; ++v) {
    const CoveragePath& path = paths[subset[v]];
    visits[v].structure = subset[v];
    visits[v].entry_index = rng.index(path.size());
    caps[v] = available_duration(path, visits[v].entry_index);
    visits[v].available_time = caps[v];
    const Pose& entry = path.points[visits[v].entry_index].pose;
    nodes[v] = {entry, entry};
  }
  timings.subset_sampling += watch.lap();

  auto finish = [&](bool feasible, double reward, double time, double tour) {
    // The steps are sub-intervals of the total; max() only absorbs rounding
    // in the double conversions.
    timings.total = std::max(total_watch.lap(), timings.subset_sampling + timings.cost_matrix +
                                                    timings.tsp + timings.time_sampling +
                                                    timings.reward);
    if (record) {
      record->feasible = feasible;
      record->total_reward = reward;
      record->total_time = time;
      record->tour_cost = tour;
      record->sampled_count = n;
      record->timings = timings;
    }
  };

  CostMatrix costs = build_cost_matrix(nodes, scenario.vehicle);
  timings.cost_matrix += watch.lap();
  Tour tour = solve_tsp(costs, mission.closed_route, rng.next());
  timings.tsp += watch.lap();
  if (tour.cost > mission.t_max) {
    finish(false, 0.0, tour.cost, tour.cost);
    return std::nullopt;
  }

  std::vector<double> times = assign_inspection_times(caps, mission.t_max - tour.cost, rng);
  auto extract_all = [&] {
    for (std::size_t v = 0; v < n; ++v) {
      visits[v].inspection_time = times[v];
      visits[v].subpath =
          extract_subpath(paths[subset[v]], visits[v].entry_index, std::min(times[v], caps[v]));
      nodes[v].exit = visits[v].subpath.exit();
    }
  };
  extract_all();
  timings.time_sampling += watch.lap();

  // Refine the tour once with the realized exit poses.
  costs = build_cost_matrix(nodes, scenario.vehicle);
  timings.cost_matrix += watch.lap();
  tour = solve_tsp(costs, mission.closed_route, rng.next());
  timings.tsp += watch.lap();
  if (tour.cost > mission.t_max) {
    finish(false, 0.0, tour.cost, tour.cost);
    return std::nullopt;
  }
  times = scale_inspection_times(times, caps, mission.t_max - tour.cost);
  extract_all();
  timings.time_sampling += watch.lap();

  // Rescaling moves the exits again; shrink until the fixed tour order fits.
  auto total_time = [&](double tour_cost_value) {
    return std::accumulate(times.begin(), times.end(), 0.0) + tour_cost_value;
  };
  costs = build_cost_matrix(nodes, scenario.vehicle);
  tour.cost = tour_cost(costs, tour.order, mission.closed_route);
  for (int repair = 0; total_time(tour.cost) > mission.t_max + kBudgetSlack; ++repair) {
    if (repair == kMaxBudgetRepairs || tour.cost > mission.t_max) {
      timings.cost_matrix += watch.lap();
      finish(false, 0.0, total_time(tour.cost), tour.cost);
      return std::nullopt;
    }
    times = scale_inspection_times(times, caps, mission.t_max - tour.cost);
    extract_all();
    costs = build_cost_matrix(nodes, scenario.vehicle);
    tour.cost = tour_cost(costs, tour.order, mission.closed_route);
  }
  timings.cost_matrix += watch.lap();

  SampledPlan plan;
  for (auto& visit : visits) {
    visit.gain =
        compute_reward(scenario.structures[visit.structure], paths[visit.structure], visit.subpath);
    plan.total_reward += visit.gain.reward;
  }
  plan.visits = std::move(visits);
  plan.tour = std::move(tour);
  plan.total_time = total_time(plan.tour.cost);
  timings.reward += watch.lap();
  finish(true, plan.total_reward, plan.total_time, plan.tour.cost);
  return plan;
}

AssembledPath assemble_path(const SampledPlan& plan, const Scenario& scenario,
                            bool closed_route) {
  AssembledPath out;
  double t = 0.0;
  const VehicleConfig& vehicle = scenario.vehicle;
  for (std::size_t k = 0; k < plan.tour.order.size(); ++k) {
    const StructureVisit& visit = plan.visits.at(plan.tour.order[k]);
    const std::string& id = scenario.structures.at(visit.structure).id;
    const SubPath& sub = visit.subpath;
    if (k == 0) {
      out.samples.push_back({sub.entry(), 0.0, SegmentKind::kInspect, id});
    } else {
      t += travel_time(out.samples.back().pose, sub.entry(), vehicle.v_travel,
                       vehicle.yaw_rate_max);
      out.samples.push_back({sub.entry(), t, SegmentKind::kTransit, id});
    }
    const double base = t;
    for (std::size_t p = 1; p < sub.poses.size(); ++p) {
      out.samples.push_back({sub.poses[p], base + sub.times[p], SegmentKind::kInspect, id});
    }
    t = base + sub.duration;
    out.samples.back().time = t;
  }
  if (closed_route && plan.tour.order.size() > 1) {
    const StructureVisit& first = plan.visits.at(plan.tour.order.front());
    t += travel_time(out.samples.back().pose, first.subpath.entry(), vehicle.v_travel,
                     vehicle.yaw_rate_max);
    out.samples.push_back({first.subpath.entry(), t, SegmentKind::kTransit,
                           scenario.structures.at(first.structure).id});
  }
  out.total_duration = t;
  return out;
}

RunResult run_planner(const Scenario& scenario, const std::vector<CoveragePath>& paths,
                      const MissionConfig& mission) {
  mission.validate();
  for (std::size_t i = 0; i < paths.size() && i < scenario.structures.size(); ++i) {
    if (paths[i].structure_id != scenario.structures[i].id) {
      throw std::invalid_argument("coverage path '" + paths[i].structure_id +
                                  "' does not match structure '" + scenario.structures[i].id + "'");
    }
  }
  RunResult result;
  std::optional<SampledPlan> best;
  for (std::uint32_t k = 0; k < mission.iterations; ++k) {
    Rng rng(derive_seed(mission.rng_seed, k));
    IterationRecord record;
    record.iteration = k;
    auto plan = run_iteration(scenario, paths, mission, rng, &record);
    result.history.push_back(record);
    if (plan && (!best || plan->total_reward > best->total_reward)) {
      best = std::move(plan);
      result.best_iteration = k;
    }
  }
  if (!best) {
    throw NoFeasiblePlan("no feasible iteration in " + std::to_string(mission.iterations) +
                         " iterations for t_max = " + std::to_string(mission.t_max) + " s");
  }
  result.best = std::move(*best);
  result.path = assemble_path(result.best, scenario, mission.closed_route);
  return result;
}

std::vector<CoveragePath> cover_scenario(const Scenario& scenario, std::uint64_t seed) {
  std::vector<CoveragePath> paths;
  paths.reserve(scenario.structures.size());
  for (std::size_t i = 0; i < scenario.structures.size(); ++i) {
    paths.push_back(plan_coverage(scenario.structures[i], scenario.sensor, scenario.vehicle,
                                  derive_seed(seed, 1000 + i)));
  }
  return paths;
}

}  // namespace disip
