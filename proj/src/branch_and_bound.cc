// Depth-first branch-and-bound over simple partial paths rooted at the source.
//
// Every arc carries a decision status. An arc is decided-in when it lies on
// the partial path and decided-out when no completion can use it: its tail is
// a visited vertex other than the current one, its head is already visited,
// or its tail is the sink. A conflict is charged to the node as soon as both
// of its arcs are decided and share the same status. Undecided conflicts are
// charged nothing, so
//
//   bound = partial arc cost + committed penalties + dist_to_sink[current]
//
// never exceeds the objective of any completion.

#include <algorithm>
#include <chrono>

#include "spedac/solvers.h"

namespace spedac {
namespace {

using Clock = std::chrono::steady_clock;

enum ArcState : uint8_t { kUndecided = 0, kIn = 1, kOut = 2 };

class Search {
 public:
  Search(const Instance& instance, const BranchAndBoundOptions& options)
      : instance_(instance),
        options_(options),
        start_(Clock::now()),
        dist_to_sink_(Dijkstra(instance, /*from_sink=*/true).distance),
        state_(instance.arc_count(), kUndecided),
        visited_(instance.vertex_count(), 0) {}

  SolveReport Run() {
    const VertexId s = instance_.source();
    if (dist_to_sink_[s] >= kInfiniteCost) {
      report_.status = SolveStatus::kInfeasible;
      report_.lower_bound = kInfiniteCost;
      report_.seconds_total = Clock::now() - start_;
      return report_;
    }
    visited_[s] = 1;
    path_.push_back(s);
    for (ArcIndex a : instance_.in_arcs(s)) Decide(a, kOut);
    for (ArcIndex a : instance_.out_arcs(instance_.sink())) {
      if (state_[a] == kUndecided) Decide(a, kOut);
    }
    Explore();

    report_.seconds_total = Clock::now() - start_;
    if (aborted_) {
      report_.status = SolveStatus::kTimeLimit;
      report_.lower_bound = std::min(report_.upper_bound, open_bound_);
    } else if (report_.incumbent) {
      report_.status = SolveStatus::kOptimal;
      report_.lower_bound = report_.upper_bound;
    } else {
      report_.status = SolveStatus::kInfeasible;
      report_.lower_bound = kInfiniteCost;
    }
    return report_;
  }

 private:
  void Decide(ArcIndex a, ArcState status) {
    state_[a] = status;
    trail_.push_back(a);
    for (ConflictIndex c : instance_.conflicts_of(a)) {
      if (state_[instance_.partner(c, a)] == status) {
        committed_ += instance_.conflict(c).penalty;
      }
    }
  }

  void UndoTo(size_t mark) {
    while (trail_.size() > mark) {
      const ArcIndex a = trail_.back();
      trail_.pop_back();
      for (ConflictIndex c : instance_.conflicts_of(a)) {
        if (state_[instance_.partner(c, a)] == state_[a]) {
          committed_ -= instance_.conflict(c).penalty;
        }
      }
      state_[a] = kUndecided;
    }
  }

  bool OutOfTime() {
    if (++report_.nodes_explored % 1024 == 0 &&
        Clock::now() - start_ > options_.time_limit) {
      aborted_ = true;
    }
    return aborted_;
  }

  // Returns after the subtree rooted at the current partial path is finished
  // or the time limit trips.
  void Explore() {
    const VertexId v = path_.back();
    const Cost bound = arc_cost_ + committed_ + dist_to_sink_[v];
    if (options_.on_node) options_.on_node(path_, bound);
    if (OutOfTime()) {
      open_bound_ = std::min(open_bound_, bound);
      return;
    }
    if (bound >= report_.upper_bound) return;
    if (v == instance_.sink()) {
      PathSolution solution = Evaluate(instance_, path_);
      if (solution.objective() < report_.upper_bound) {
        report_.upper_bound = solution.objective();
        report_.incumbent_history.push_back(report_.upper_bound);
        report_.incumbent = std::move(solution);
        report_.seconds_to_best = Clock::now() - start_;
      }
      return;
    }

    std::vector<ArcIndex> children;
    for (ArcIndex a : instance_.out_arcs(v)) {
      const VertexId w = instance_.arc(a).head;
      if (!visited_[w] && dist_to_sink_[w] < kInfiniteCost) children.push_back(a);
    }
    auto rank = [&](ArcIndex a) {
      return instance_.arc(a).weight + dist_to_sink_[instance_.arc(a).head];
    };
    std::sort(children.begin(), children.end(), [&](ArcIndex x, ArcIndex y) {
      const Cost rx = rank(x), ry = rank(y);
      return rx != ry ? rx < ry : x < y;
    });

    for (size_t i = 0; i < children.size(); ++i) {
      const ArcIndex a = children[i];
      const VertexId w = instance_.arc(a).head;
      const size_t mark = trail_.size();
      Decide(a, kIn);
      for (ArcIndex other : instance_.out_arcs(v)) {
        if (state_[other] == kUndecided) Decide(other, kOut);
      }
      for (ArcIndex other : instance_.in_arcs(w)) {
        if (state_[other] == kUndecided) Decide(other, kOut);
      }
      visited_[w] = 1;
      path_.push_back(w);
      arc_cost_ += instance_.arc(a).weight;

      Explore();

      arc_cost_ -= instance_.arc(a).weight;
      path_.pop_back();
      visited_[w] = 0;
      UndoTo(mark);
      if (aborted_) {
        // This node stays open: its bound covers the unexplored siblings.
        open_bound_ = std::min(open_bound_, bound);
        return;
      }
    }
  }

  const Instance& instance_;
  const BranchAndBoundOptions& options_;
  const Clock::time_point start_;
  const std::vector<Cost> dist_to_sink_;

  std::vector<uint8_t> state_;
  std::vector<ArcIndex> trail_;
  std::vector<uint8_t> visited_;
  std::vector<VertexId> path_;
  Cost arc_cost_ = 0;
  Cost committed_ = 0;

  bool aborted_ = false;
  Cost open_bound_ = kInfiniteCost;
  SolveReport report_;
};

}  // namespace

SolveReport BranchAndBound(const Instance& instance,
                           const BranchAndBoundOptions& options) {
  return Search(instance, options).Run();
}

}  // namespace spedac
