#include <chrono>

#include "spedac/solvers.h"

namespace spedac {
namespace {

using Clock = std::chrono::steady_clock;

void Extend(const Instance& instance, std::vector<VertexId>& path,
            std::vector<uint8_t>& visited, int64_t& count,
            const std::function<void(std::span<const VertexId>)>& visit) {
  const VertexId v = path.back();
  if (v == instance.sink()) {
    ++count;
    visit(path);
    return;
  }
  for (ArcIndex a : instance.out_arcs(v)) {
    const VertexId w = instance.arc(a).head;
    if (visited[w]) continue;
    visited[w] = 1;
    path.push_back(w);
    Extend(instance, path, visited, count, visit);
    path.pop_back();
    visited[w] = 0;
  }
}

}  // namespace

int64_t ForEachSimplePath(
    const Instance& instance,
    const std::function<void(std::span<const VertexId>)>& visit) {
  std::vector<VertexId> path = {instance.source()};
  std::vector<uint8_t> visited(instance.vertex_count(), 0);
  visited[instance.source()] = 1;
  int64_t count = 0;
  Extend(instance, path, visited, count, visit);
  return count;
}

SolveReport BruteForce(const Instance& instance,
                       const BruteForceOptions& options) {
  const auto start = Clock::now();
  SolveReport report;
  int64_t seen = 0;
  ForEachSimplePath(instance, [&](std::span<const VertexId> path) {
    if (++seen > options.max_paths) {
      throw GuardExceeded("brute force path guard exceeded");
    }
    if (seen % 1024 == 0 && Clock::now() - start > options.time_limit) {
      throw GuardExceeded("brute force time guard exceeded");
    }
    PathSolution solution = Evaluate(instance, path);
    if (solution.objective() < report.upper_bound) {
      report.upper_bound = solution.objective();
      report.incumbent_history.push_back(report.upper_bound);
      report.incumbent = std::move(solution);
      report.seconds_to_best = Clock::now() - start;
    }
  });
  report.nodes_explored = seen;
  report.seconds_total = Clock::now() - start;
  if (report.incumbent) {
    report.status = SolveStatus::kOptimal;
    report.lower_bound = report.upper_bound;
  } else {
    report.status = SolveStatus::kInfeasible;
    report.lower_bound = kInfiniteCost;
  }
  return report;
}

}  // namespace spedac
