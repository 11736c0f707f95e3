#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "disip/core.hpp"

namespace disip {

// Asymmetric travel-time matrix between nodes that are entered at one pose
// and left at another. Diagonal entries are never used.
class CostMatrix {
 public:
  CostMatrix() = default;
  // Row-major n*n costs; diagonal values are ignored.
  CostMatrix(std::size_t n, std::vector<double> costs);

  std::size_t size() const { return n_; }
  double operator()(std::size_t from, std::size_t to) const { return costs_[from * n_ + to]; }

  std::vector<Pose> entry_poses;
  std::vector<Pose> exit_poses;

 private:
  std::size_t n_ = 0;
  std::vector<double> costs_;
};

struct NodePoses {
  Pose entry;
  Pose exit;
};

// costs(i, j) = travel_time(exit_i, entry_j, speed, yaw_rate_max).
CostMatrix build_cost_matrix(std::span<const NodePoses> nodes, double speed,
                             double yaw_rate_max);
CostMatrix build_cost_matrix(std::span<const NodePoses> nodes, const VehicleConfig& vehicle);

struct Tour {
  std::vector<std::size_t> order;
  double cost = 0.0;
  bool closed = true;

  bool operator==(const Tour&) const = default;
};

// Sum of consecutive arc costs, plus the return arc when closed and n > 1.
double tour_cost(const CostMatrix& c, std::span<const std::size_t> order, bool closed);

struct TspOptions {
  // Nearest-neighbour starts tried; each is driven to a local optimum.
  std::size_t max_starts = 10;
  // Double-bridge kicks applied to the incumbent afterwards, each followed by
  // another descent. Only improvements are kept.
  std::size_t kicks = 30;
};

// Nearest-neighbour construction followed by asymmetric 2-opt and
// segment-exchange 3-opt until neither finds an improving move, then a few
// seeded perturbation rounds. Open routes are solved as cycles through a
// zero-cost virtual depot.
Tour solve_tsp(const CostMatrix& c, bool closed, std::uint64_t seed,
               const TspOptions& options = {});

// Exhaustive optimum; n <= 10.
Tour brute_force_tsp(const CostMatrix& c, bool closed);

}  // namespace disip
