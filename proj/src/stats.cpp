#include "disip/stats.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "disip/io.hpp"
#include "json_reader.hpp"

namespace disip {

using io::detail::Json;
using io::detail::Reader;

namespace {

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double percent(double part, double whole) {
  return whole > 0.0 ? std::clamp(100.0 * part / whole, 0.0, 100.0) : 0.0;
}

}  // namespace

RunReport make_report(const RunResult& result, const Scenario& scenario,
                      const std::vector<CoveragePath>& paths, const MissionConfig& mission) {
  RunReport r;
  r.iterations = result.history.size();
  r.best_iteration = result.best_iteration;
  r.t_max = mission.t_max;
  r.closed_route = mission.closed_route;
  r.total_reward = result.best.total_reward;
  r.total_time = result.best.total_time;
  r.mean_pairwise_distance = mean_pairwise_distance(scenario);

  double coverable_total = 0.0, covered_total = 0.0;
  std::size_t visited = 0;
  for (std::size_t i = 0; i < scenario.structures.size(); ++i) {
    const Structure& s = scenario.structures.at(i);
    StructureReport sr;
    sr.id = s.id;
    sr.weight = s.weight;
    sr.coverable_area = coverable_area(s.mesh, paths.at(i));
    for (const auto& v : result.best.visits) {
      if (v.structure != i) continue;
      sr.visited = true;
      sr.covered_area = v.gain.covered_area;
      sr.coverage_ratio = v.gain.ratio;
      sr.reward = v.gain.reward;
    }
    visited += sr.visited ? 1 : 0;
    coverable_total += sr.coverable_area;
    covered_total += sr.covered_area;
    r.available_reward += s.weight * sr.coverable_area;
    r.structures.push_back(std::move(sr));
  }
  r.visited_percent = percent(static_cast<double>(visited),
                              static_cast<double>(scenario.structures.size()));
  r.reward_percent = percent(r.total_reward, r.available_reward);
  r.coverage_percent = percent(covered_total, coverable_total);
  for (const auto& h : result.history) {
    r.history.push_back(
        {h.iteration, h.feasible, h.total_reward, h.total_time, h.tour_cost, h.sampled_count});
  }
  return r;
}

std::string report_to_text(const RunReport& r) {
  Json j;
  j["schema"] = io::kReportSchema;
  j["iterations"] = r.iterations;
  j["best_iteration"] = r.best_iteration;
  j["t_max"] = r.t_max;
  j["closed_route"] = r.closed_route;
  j["total_reward"] = r.total_reward;
  j["total_time"] = r.total_time;
  j["available_reward"] = r.available_reward;
  j["visited_percent"] = r.visited_percent;
  j["reward_percent"] = r.reward_percent;
  j["coverage_percent"] = r.coverage_percent;
  j["mean_pairwise_distance"] = r.mean_pairwise_distance;
  Json structures = Json::array();
  for (const auto& s : r.structures) {
    structures.push_back({{"id", s.id},
                          {"weight", s.weight},
                          {"coverable_area", s.coverable_area},
                          {"covered_area", s.covered_area},
                          {"coverage_ratio", s.coverage_ratio},
                          {"reward", s.reward},
                          {"visited", s.visited}});
  }
  j["structures"] = std::move(structures);
  Json history = Json::array();
  for (const auto& h : r.history) {
    history.push_back({{"iteration", h.iteration},
                       {"feasible", h.feasible},
                       {"total_reward", h.total_reward},
                       {"total_time", h.total_time},
                       {"tour_cost", h.tour_cost},
                       {"sampled_count", h.sampled_count}});
  }
  j["history"] = std::move(history);
  return j.dump(1) + "\n";
}

RunReport report_from_text(const std::string& text) {
  const Json doc = io::detail::parse(text);
  const Reader root(doc, "");
  root.expect_schema(io::kReportSchema);
  RunReport r;
  r.iterations = root["iterations"].unsigned_integer();
  r.best_iteration = root["best_iteration"].unsigned_integer();
  r.t_max = root["t_max"].number();
  r.closed_route = root["closed_route"].boolean();
  r.total_reward = root["total_reward"].number();
  r.total_time = root["total_time"].number();
  r.available_reward = root["available_reward"].number();
  r.visited_percent = root["visited_percent"].number();
  r.reward_percent = root["reward_percent"].number();
  r.coverage_percent = root["coverage_percent"].number();
  r.mean_pairwise_distance = root["mean_pairwise_distance"].number();
  const Reader structures = root["structures"];
  for (std::size_t i = 0; i < structures.size(); ++i) {
    const Reader s = structures.at(i);
    r.structures.push_back({s["id"].string(), s["weight"].number(), s["coverable_area"].number(),
                            s["covered_area"].number(), s["coverage_ratio"].number(),
                            s["reward"].number(), s["visited"].boolean()});
  }
  const Reader history = root["history"];
  for (std::size_t i = 0; i < history.size(); ++i) {
    const Reader h = history.at(i);
    r.history.push_back({h["iteration"].unsigned_integer(), h["feasible"].boolean(),
                         h["total_reward"].number(), h["total_time"].number(),
                         h["tour_cost"].number(), h["sampled_count"].unsigned_integer()});
  }
  return r;
}

std::vector<double> best_reward_trace(const std::vector<IterationRecord>& history) {
  std::vector<double> trace;
  double best = 0.0;
  for (const auto& h : history) {
    if (h.feasible) best = std::max(best, h.total_reward);
    trace.push_back(best);
  }
  return trace;
}

std::string iteration_timings_csv(const std::vector<IterationRecord>& history) {
  std::ostringstream out;
  out << "iteration,feasible,sampled_count,total_reward,subset_sampling,cost_matrix,tsp,"
         "time_sampling,reward,total\n";
  for (const auto& h : history) {
    const auto& t = h.timings;
    out << h.iteration << ',' << (h.feasible ? 1 : 0) << ',' << h.sampled_count << ','
        << num(h.total_reward) << ',' << num(t.subset_sampling) << ',' << num(t.cost_matrix)
        << ',' << num(t.tsp) << ',' << num(t.time_sampling) << ',' << num(t.reward) << ','
        << num(t.total) << '\n';
  }
  return out.str();
}

std::string structure_coverage_csv(const RunReport& report) {
  std::ostringstream out;
  out << "structure_id,weight,visited,coverage_percent,covered_area,coverable_area,reward\n";
  for (const auto& s : report.structures) {
    out << s.id << ',' << num(s.weight) << ',' << (s.visited ? 1 : 0) << ','
        << num(100.0 * s.coverage_ratio) << ',' << num(s.covered_area) << ','
        << num(s.coverable_area) << ',' << num(s.reward) << '\n';
  }
  return out.str();
}

double tsp_time_share(const std::vector<IterationRecord>& history) {
  double tsp = 0.0, steps = 0.0;
  for (const auto& h : history) {
    const auto& t = h.timings;
    tsp += t.tsp;
    steps += t.subset_sampling + t.cost_matrix + t.tsp + t.time_sampling + t.reward;
  }
  return steps > 0.0 ? tsp / steps : 0.0;
}

void emit_plot_data(const std::filesystem::path& dir, const RunReport& report,
                    const std::vector<IterationRecord>& history) {
  io::write_text(dir / "iteration_timings.csv", iteration_timings_csv(history));
  io::write_text(dir / "structure_coverage.csv", structure_coverage_csv(report));
}

// ------------------------------------------------------------------- batch

BatchProtocol protocol_from_text(const std::string& text) {
  const Json doc = io::detail::parse(text);
  const Reader root(doc, "");
  root.expect_schema(io::kProtocolSchema);
  BatchProtocol protocol;
  const Reader cases = root["cases"];
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Reader c = cases.at(i);
    BatchCase bc;
    bc.count = c["count"].unsigned_integer();
    if (bc.count == 0) c["count"].fail("structure count must be at least 1");
    if (c.has("bounds")) {
      const Reader b = c["bounds"];
      if (b.size() != 3) b.fail("expected [dx, dy, dz]");
      bc.bounds = {b.at(0).number(), b.at(1).number(), b.at(2).number()};
    }
    if (c.has("t_max")) bc.t_max = c["t_max"].number();
    if (c.has("iterations")) bc.iterations = static_cast<std::uint32_t>(c["iterations"].unsigned_integer());
    if (c.has("closed_route")) bc.closed_route = c["closed_route"].boolean();
    if (c.has("margin")) bc.margin = c["margin"].number();
    if (c.has("seeds")) {
      const Reader s = c["seeds"];
      for (std::size_t k = 0; k < s.size(); ++k) bc.seeds.push_back(s.at(k).unsigned_integer());
    } else {
      const std::uint64_t first = c["first_seed"].unsigned_integer();
      const std::uint64_t repeats = c["repeats"].unsigned_integer();
      for (std::uint64_t k = 0; k < repeats; ++k) bc.seeds.push_back(first + k);
    }
    if (bc.seeds.empty()) c.fail("case has no seeds");
    protocol.cases.push_back(std::move(bc));
  }
  if (protocol.cases.empty()) root["cases"].fail("protocol has no cases");
  return protocol;
}

BatchRun run_single(const BatchCase& c, std::uint64_t seed) {
  Rng rng(seed);
  Scenario scenario = generate_scenario(builtin_archetypes(), c.count, c.bounds, c.margin, rng);
  scenario.mission.t_max = c.t_max;
  scenario.mission.iterations = c.iterations;
  scenario.mission.closed_route = c.closed_route;
  scenario.mission.rng_seed = seed;
  const std::vector<CoveragePath> paths = cover_scenario(scenario, seed);
  BatchRun run;
  run.count = c.count;
  run.seed = seed;
  run.mean_pairwise_distance = mean_pairwise_distance(scenario);
  try {
    const RunResult result = run_planner(scenario, paths, scenario.mission);
    const RunReport report = make_report(result, scenario, paths, scenario.mission);
    run.feasible = true;
    run.coverage_percent = report.coverage_percent;
    run.reward_percent = report.reward_percent;
    run.visited_percent = report.visited_percent;
    double total = 0.0;
    for (const auto& h : result.history) total += h.timings.total;
    run.mean_iteration_seconds = total / static_cast<double>(result.history.size());
    run.tsp_share = tsp_time_share(result.history);
  } catch (const NoFeasiblePlan&) {
    run.feasible = false;
  }
  return run;
}

BatchResult run_batch(const BatchProtocol& protocol, unsigned jobs) {
  std::vector<std::pair<const BatchCase*, std::uint64_t>> work;
  for (const auto& c : protocol.cases) {
    for (auto seed : c.seeds) work.emplace_back(&c, seed);
  }
  if (work.empty()) throw std::invalid_argument("batch protocol is empty");

  BatchResult result;
  result.runs.resize(work.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      try {
        result.runs.at(i) = run_single(*work.at(i).first, work.at(i).second);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(work.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::map<std::size_t, std::size_t> row_of;
  for (const auto& run : result.runs) {
    auto [it, inserted] = row_of.emplace(run.count, result.rows.size());
    if (inserted) result.rows.push_back(BatchRow{run.count});
    BatchRow& row = result.rows[it->second];
    ++row.runs;
    row.feasible_runs += run.feasible ? 1 : 0;
    row.mean_coverage_percent += run.coverage_percent;
    row.mean_reward_percent += run.reward_percent;
    row.mean_visited_percent += run.visited_percent;
    row.mean_pairwise_distance += run.mean_pairwise_distance;
    row.mean_iteration_seconds += run.mean_iteration_seconds;
    row.mean_tsp_share += run.tsp_share;
  }
  for (auto& row : result.rows) {
    const double n = static_cast<double>(row.runs);
    row.mean_coverage_percent /= n;
    row.mean_reward_percent /= n;
    row.mean_visited_percent /= n;
    row.mean_pairwise_distance /= n;
    row.mean_iteration_seconds /= n;
    row.mean_tsp_share /= n;
  }
  return result;
}

std::string batch_coverage_csv(const BatchResult& result) {
  std::ostringstream out;
  out << "count,runs,feasible_runs,mean_coverage_percent,mean_reward_percent,"
         "mean_visited_percent,mean_pairwise_distance\n";
  for (const auto& r : result.rows) {
    out << r.count << ',' << r.runs << ',' << r.feasible_runs << ','
        << num(r.mean_coverage_percent) << ',' << num(r.mean_reward_percent) << ','
        << num(r.mean_visited_percent) << ',' << num(r.mean_pairwise_distance) << '\n';
  }
  return out.str();
}

std::string batch_timing_csv(const BatchResult& result) {
  std::ostringstream out;
  out << "count,runs,mean_iteration_seconds,mean_tsp_share\n";
  for (const auto& r : result.rows) {
    out << r.count << ',' << r.runs << ',' << num(r.mean_iteration_seconds) << ','
        << num(r.mean_tsp_share) << '\n';
  }
  return out.str();
}

}  // namespace disip
