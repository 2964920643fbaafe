#ifndef SPEDAC_SOLVERS_H_
#define SPEDAC_SOLVERS_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spedac/core.h"

namespace spedac {

using Seconds = std::chrono::duration<double>;

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kTimeLimit };

std::string ToString(SolveStatus status);

struct SolveReport {
  Cost lower_bound = 0;
  Cost upper_bound = kInfiniteCost;
  std::optional<PathSolution> incumbent;
  Seconds seconds_to_best{0};
  Seconds seconds_total{0};
  int64_t nodes_explored = 0;
  SolveStatus status = SolveStatus::kInfeasible;
  // Objectives of successive incumbents, in the order they were found.
  std::vector<Cost> incumbent_history;
};

// Percentage gap 100 * (ub - lb) / ub; zero when ub == lb. Throws
// std::domain_error when ub is infinite (no incumbent) or lb > ub.
double OptimalityGap(double lower_bound, double upper_bound);
double OptimalityGap(const SolveReport& report);

// Raised by BruteForce when its enumeration guard trips.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Classical shortest paths on arc weights; conflicts are ignored.

struct ShortestPathTree {
  std::vector<Cost> distance;          // kInfiniteCost when unreachable
  std::vector<ArcIndex> predecessor;   // tree arc toward the root, or -1
};

// Single-source tree rooted at the source, or (from_sink) single-sink tree on
// reversed arcs rooted at the sink. In the reversed tree `predecessor[v]` is
// the first arc of a shortest v -> sink path.
ShortestPathTree Dijkstra(const Instance& instance, bool from_sink);

// Conflict-ignoring shortest source-sink path, or nullopt if unreachable.
std::optional<std::vector<VertexId>> ShortestPathVertices(
    const Instance& instance);

struct WeightedPath {
  Cost cost = 0;
  std::vector<VertexId> vertices;

  friend auto operator<=>(const WeightedPath&, const WeightedPath&) = default;
};

// Shortest `from` -> `to` path avoiding banned vertices and arcs. Optional
// `weights` overrides the arc weights (must be non-negative).
std::optional<WeightedPath> RestrictedShortestPath(
    const Instance& instance, VertexId from, VertexId to,
    std::span<const uint8_t> banned_vertices,
    std::span<const uint8_t> banned_arcs,
    std::span<const Cost> weights = {});

// Yen's algorithm: up to `k` loopless source-sink paths in non-decreasing arc
// cost. Equal-cost candidates pending at the same time leave in vertex-sequence
// order.
std::vector<WeightedPath> KShortestPaths(const Instance& instance, int k);

// ---------------------------------------------------------------------------
// Exhaustive oracle.

struct BruteForceOptions {
  int64_t max_paths = 50'000'000;
  Seconds time_limit{std::chrono::hours(1)};
};

// Enumerates every simple source-sink path and scores it with Evaluate().
SolveReport BruteForce(const Instance& instance,
                       const BruteForceOptions& options = {});

// Calls `visit` on every simple source-sink path, depth first in arc order.
// Returns the number of paths visited.
int64_t ForEachSimplePath(
    const Instance& instance,
    const std::function<void(std::span<const VertexId>)>& visit);

// ---------------------------------------------------------------------------
// Exact depth-first branch-and-bound.

struct BranchAndBoundOptions {
  Seconds time_limit{1800};
  // Invoked once per search node with the partial path and its bound.
  std::function<void(std::span<const VertexId>, Cost)> on_node;
};

SolveReport BranchAndBound(const Instance& instance,
                           const BranchAndBoundOptions& options = {});

// ---------------------------------------------------------------------------
// Heuristic: k-shortest candidate pool plus single-detour local search,
// seeded with the conflict-ignoring shortest path.

struct LocalSearchOptions {
  Seconds time_limit{1800};
  uint64_t seed = 1;
  int pool_size = 50;
  // Maximum number of path arcs a detour may replace; 0 means unlimited.
  int detour_radius = 0;
};

SolveReport LocalSearch(const Instance& instance,
                        const LocalSearchOptions& options = {});

}  // namespace spedac

#endif  // SPEDAC_SOLVERS_H_
