#include "disip/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "disip/motion.hpp"
#include "disip/random.hpp"

namespace disip {

CostMatrix::CostMatrix(std::size_t n, std::vector<double> costs) : n_(n), costs_(std::move(costs)) {
  if (costs_.size() != n * n) throw std::invalid_argument("cost matrix size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = costs_[i * n + j];
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("cost matrix entries must be finite and non-negative");
      }
    }
  }
}

CostMatrix build_cost_matrix(std::span<const NodePoses> nodes, double speed,
                             double yaw_rate_max) {
  const std::size_t n = nodes.size();
  std::vector<double> costs(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) costs[i * n + j] = travel_time(nodes[i].exit, nodes[j].entry, speed, yaw_rate_max);
    }
  }
  CostMatrix m(n, std::move(costs));
  for (const auto& node : nodes) {
    m.entry_poses.push_back(node.entry);
    m.exit_poses.push_back(node.exit);
  }
  return m;
}

CostMatrix build_cost_matrix(std::span<const NodePoses> nodes, const VehicleConfig& vehicle) {
  return build_cost_matrix(nodes, vehicle.v_travel, vehicle.yaw_rate_max);
}

double tour_cost(const CostMatrix& c, std::span<const std::size_t> order, bool closed) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) total += c(order[k], order[k + 1]);
  if (closed && order.size() > 1) total += c(order.back(), order.front());
  return total;
}

namespace {

constexpr double kImprovementEps = 1e-9;
constexpr std::size_t kNoDepot = std::numeric_limits<std::size_t>::max();

// Cycle view over the matrix, optionally extended by a zero-cost depot node.
class CycleCost {
 public:
  CycleCost(const CostMatrix& c, bool with_depot)
      : c_(c), depot_(with_depot ? c.size() : kNoDepot) {}

  double operator()(std::size_t from, std::size_t to) const {
    if (from == depot_ || to == depot_) return 0.0;
    return c_(from, to);
  }

  std::size_t node_count() const { return c_.size() + (depot_ == kNoDepot ? 0 : 1); }
  std::size_t depot() const { return depot_; }

  double cycle(const std::vector<std::size_t>& t) const {
    double total = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) total += (*this)(t[k], t[(k + 1) % t.size()]);
    return total;
  }

 private:
  const CostMatrix& c_;
  std::size_t depot_;
};

std::vector<std::size_t> nearest_neighbour(const CostMatrix& c, std::size_t start) {
  const std::size_t n = c.size();
  std::vector<bool> used(n, false);
  std::vector<std::size_t> order{start};
  used[start] = true;
  while (order.size() < n) {
    const std::size_t cur = order.back();
    std::size_t best = n;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (!used[j] && c(cur, j) < best_cost) {
        best = j;
        best_cost = c(cur, j);
      }
    }
    used[best] = true;
    order.push_back(best);
  }
  return order;
}

// One first-improvement scan over all 2-opt moves of the cycle. A move
// reverses a cyclic segment [a, a+len) and is evaluated exactly on the
// asymmetric matrix via forward and backward prefix sums.
bool two_opt_step(std::vector<std::size_t>& t, const CycleCost& cost) {
  const std::size_t n = t.size();
  if (n < 4) return false;
  std::vector<double> fwd(2 * n, 0.0), bwd(2 * n, 0.0);
  for (std::size_t m = 0; m + 1 < 2 * n; ++m) {
    const std::size_t u = t[m % n], v = t[(m + 1) % n];
    fwd[m + 1] = fwd[m] + cost(u, v);
    bwd[m + 1] = bwd[m] + cost(v, u);
  }
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t prev = t[(a + n - 1) % n];
    const std::size_t first = t[a];
    for (std::size_t len = 2; len + 2 <= n; ++len) {
      const std::size_t q = a + len - 1;
      const std::size_t last = t[q % n];
      const std::size_t next = t[(q + 1) % n];
      const double removed = cost(prev, first) + (fwd[q] - fwd[a]) + cost(last, next);
      const double added = cost(prev, last) + (bwd[q] - bwd[a]) + cost(first, next);
      if (added - removed < -kImprovementEps) {
        std::rotate(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(a), t.end());
        std::reverse(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(len));
        return true;
      }
    }
  }
  return false;
}

// Orientation-preserving 3-opt: cut the arcs leaving positions i < j < k and
// swap the two middle segments. Or-opt moves are the special case of a short
// segment. Scanning continues after an applied move.
bool segment_exchange_pass(std::vector<std::size_t>& t, const CycleCost& cost) {
  const std::size_t n = t.size();
  if (n < 3) return false;
  bool improved = false;
  std::vector<std::size_t> buffer(n);
  for (std::size_t i = 0; i + 2 < n; ++i) {
    for (std::size_t j = i + 1; j + 1 < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const std::size_t ti = t[i], ti1 = t[i + 1];
        const std::size_t tj = t[j], tj1 = t[j + 1];
        const std::size_t tk = t[k], tk1 = t[(k + 1) % n];
        const double delta = cost(ti, tj1) + cost(tk, ti1) + cost(tj, tk1) - cost(ti, ti1) -
                             cost(tj, tj1) - cost(tk, tk1);
        if (delta < -kImprovementEps) {
          auto out = buffer.begin();
          out = std::copy(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i + 1), out);
          out = std::copy(t.begin() + static_cast<std::ptrdiff_t>(j + 1),
                          t.begin() + static_cast<std::ptrdiff_t>(k + 1), out);
          out = std::copy(t.begin() + static_cast<std::ptrdiff_t>(i + 1),
                          t.begin() + static_cast<std::ptrdiff_t>(j + 1), out);
          std::copy(t.begin() + static_cast<std::ptrdiff_t>(k + 1), t.end(), out);
          t.swap(buffer);
          improved = true;
        }
      }
    }
  }
  return improved;
}

void local_search(std::vector<std::size_t>& t, const CycleCost& cost) {
  for (;;) {
    while (two_opt_step(t, cost)) {
    }
    if (!segment_exchange_pass(t, cost)) break;
  }
}

// Cuts three random arcs and reconnects A C B D. Cycles under 4 nodes are
// returned unchanged.
std::vector<std::size_t> double_bridge(const std::vector<std::size_t>& t, Rng& rng) {
  const std::size_t n = t.size();
  if (n < 4) return t;
  std::size_t cut[3];
  do {
    for (auto& c : cut) c = 1 + rng.index(n - 1);
    std::sort(std::begin(cut), std::end(cut));
  } while (cut[0] == cut[1] || cut[1] == cut[2]);
  std::vector<std::size_t> out;
  out.reserve(n);
  const auto at = [&](std::size_t k) { return t.begin() + static_cast<std::ptrdiff_t>(k); };
  out.insert(out.end(), t.begin(), at(cut[0]));
  out.insert(out.end(), at(cut[1]), at(cut[2]));
  out.insert(out.end(), at(cut[0]), at(cut[1]));
  out.insert(out.end(), at(cut[2]), t.end());
  return out;
}

}  // namespace

Tour solve_tsp(const CostMatrix& c, bool closed, std::uint64_t seed, const TspOptions& options) {
  const std::size_t n = c.size();
  if (n == 0) throw std::invalid_argument("solve_tsp: empty matrix");
  if (n == 1) return Tour{{0}, 0.0, closed};

  const CycleCost cost(c, !closed);
  Rng rng(seed);
  const std::size_t first_start = rng.index(n);
  const std::size_t starts = std::clamp<std::size_t>(options.max_starts, 1, n);

  std::vector<std::size_t> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts; ++s) {
    std::vector<std::size_t> t = nearest_neighbour(c, (first_start + s) % n);
    if (!closed) t.push_back(cost.depot());
    local_search(t, cost);
    const double value = cost.cycle(t);
    if (value < best_cost - kImprovementEps) {
      best_cost = value;
      best = std::move(t);
    }
  }

  for (std::size_t k = 0; k < options.kicks && best.size() >= 4; ++k) {
    std::vector<std::size_t> t = double_bridge(best, rng);
    local_search(t, cost);
    const double value = cost.cycle(t);
    if (value < best_cost - kImprovementEps) {
      best_cost = value;
      best = std::move(t);
    }
  }

  // Canonical rotation: closed tours start at node 0, open routes start
  // right after the virtual depot, which is then dropped.
  const std::size_t anchor = closed ? 0 : cost.depot();
  auto it = std::find(best.begin(), best.end(), anchor);
  std::rotate(best.begin(), it, best.end());
  if (!closed) best.erase(best.begin());

  Tour tour{std::move(best), 0.0, closed};
  tour.cost = tour_cost(c, tour.order, closed);
  return tour;
}

Tour brute_force_tsp(const CostMatrix& c, bool closed) {
  const std::size_t n = c.size();
  if (n == 0) throw std::invalid_argument("brute_force_tsp: empty matrix");
  if (n > 10) throw std::invalid_argument("brute_force_tsp: at most 10 nodes supported");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Closed tours are rotation invariant: pin node 0 first.
  const auto first = closed ? order.begin() + 1 : order.begin();
  Tour best{order, tour_cost(c, order, closed), closed};
  while (std::next_permutation(first, order.end())) {
    const double value = tour_cost(c, order, closed);
    if (value < best.cost) best = Tour{order, value, closed};
  }
  return best;
}

}  // namespace disip
