#include "spedac/core.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace spedac {
namespace {

int64_t PairKey(VertexId tail, VertexId head, int32_t vertex_count) {
  return static_cast<int64_t>(tail) * vertex_count + head;
}

}  // namespace

Instance::Instance(int32_t vertex_count, std::vector<ArcRecord> arcs,
                   std::vector<ConflictRecord> conflicts, VertexId source,
                   VertexId sink)
    : vertex_count_(vertex_count),
      arcs_(std::move(arcs)),
      conflicts_(std::move(conflicts)),
      source_(source),
      sink_(sink) {
  if (vertex_count_ < 2) {
    throw InvariantError("vertex count must be at least 2");
  }
  auto valid_vertex = [&](VertexId v) { return v >= 0 && v < vertex_count_; };
  if (!valid_vertex(source_) || !valid_vertex(sink_)) {
    throw InvariantError("source or sink out of range");
  }
  if (source_ == sink_) throw InvariantError("source equals sink");

  out_arcs_.resize(vertex_count_);
  in_arcs_.resize(vertex_count_);
  arc_lookup_.reserve(arcs_.size());
  for (ArcIndex a = 0; a < arc_count(); ++a) {
    const ArcRecord& rec = arcs_[a];
    if (!valid_vertex(rec.tail) || !valid_vertex(rec.head)) {
      throw InvariantError("arc endpoint out of range");
    }
    if (rec.tail == rec.head) throw InvariantError("self-loop arc");
    if (rec.weight < 0) throw InvariantError("negative arc weight");
    if (!arc_lookup_.emplace(PairKey(rec.tail, rec.head, vertex_count_), a)
             .second) {
      throw InvariantError("duplicate arc");
    }
    out_arcs_[rec.tail].push_back(a);
    in_arcs_[rec.head].push_back(a);
  }

  conflicts_of_arc_.resize(arcs_.size());
  std::set<std::pair<ArcIndex, ArcIndex>> seen;
  for (ConflictIndex c = 0; c < conflict_count(); ++c) {
    const ConflictRecord& rec = conflicts_[c];
    if (rec.arc_a < 0 || rec.arc_a >= arc_count() || rec.arc_b < 0 ||
        rec.arc_b >= arc_count()) {
      throw InvariantError("arc index out of range");
    }
    if (rec.arc_a == rec.arc_b) throw InvariantError("conflict pairs an arc with itself");
    if (rec.penalty < 1) throw InvariantError("non-positive penalty");
    if (!seen.emplace(std::minmax(rec.arc_a, rec.arc_b)).second) {
      throw InvariantError("duplicate conflict");
    }
    conflicts_of_arc_[rec.arc_a].push_back(c);
    conflicts_of_arc_[rec.arc_b].push_back(c);
  }
}

std::optional<ArcIndex> Instance::FindArc(VertexId tail, VertexId head) const {
  if (tail < 0 || tail >= vertex_count_ || head < 0 || head >= vertex_count_) {
    return std::nullopt;
  }
  auto it = arc_lookup_.find(PairKey(tail, head, vertex_count_));
  if (it == arc_lookup_.end()) return std::nullopt;
  return it->second;
}

Cost Instance::TotalPenalty() const {
  Cost total = 0;
  for (const ConflictRecord& c : conflicts_) total += c.penalty;
  return total;
}

PathSolution Evaluate(const Instance& instance,
                      std::span<const VertexId> vertices) {
  if (vertices.size() < 2) throw MalformedPath("path needs at least two vertices");
  if (vertices.front() != instance.source()) {
    throw MalformedPath("path does not start at the source");
  }
  if (vertices.back() != instance.sink()) {
    throw MalformedPath("path does not end at the sink");
  }
  std::vector<uint8_t> visited(instance.vertex_count(), 0);
  std::vector<uint8_t> on_path(instance.arc_count(), 0);
  PathSolution solution;
  solution.vertices.assign(vertices.begin(), vertices.end());
  for (size_t i = 0; i < vertices.size(); ++i) {
    const VertexId v = vertices[i];
    if (v < 0 || v >= instance.vertex_count()) {
      throw MalformedPath("vertex id out of range");
    }
    if (visited[v]) throw MalformedPath("vertex repeats on path");
    visited[v] = 1;
    if (i == 0) continue;
    const std::optional<ArcIndex> arc = instance.FindArc(vertices[i - 1], v);
    if (!arc) throw MalformedPath("consecutive vertices are not joined by an arc");
    solution.arc_indices.push_back(*arc);
    solution.arc_cost += instance.arc(*arc).weight;
    on_path[*arc] = 1;
  }
  for (ConflictIndex c = 0; c < instance.conflict_count(); ++c) {
    const ConflictRecord& rec = instance.conflict(c);
    if (on_path[rec.arc_a] == on_path[rec.arc_b]) {
      solution.violated_conflicts.push_back(c);
      solution.penalty_cost += rec.penalty;
    }
  }
  return solution;
}

IncidenceVector IncidenceOf(const Instance& instance,
                            const PathSolution& solution) {
  IncidenceVector point;
  point.arc_flags.assign(instance.arc_count(), 0);
  for (ArcIndex a : solution.arc_indices) point.arc_flags[a] = 1;
  point.penalty_flags.resize(instance.conflict_count());
  for (ConflictIndex c = 0; c < instance.conflict_count(); ++c) {
    const ConflictRecord& rec = instance.conflict(c);
    point.penalty_flags[c] = point.arc_flags[rec.arc_a] & point.arc_flags[rec.arc_b];
  }
  return point;
}

Cost LinearObjective(const Instance& instance, const IncidenceVector& point) {
  Cost value = 0;
  for (ArcIndex a = 0; a < instance.arc_count(); ++a) {
    value += instance.arc(a).weight * point.arc_flags[a];
  }
  for (ConflictIndex c = 0; c < instance.conflict_count(); ++c) {
    const ConflictRecord& rec = instance.conflict(c);
    value += rec.penalty * (2 * Cost{point.penalty_flags[c]} -
                            point.arc_flags[rec.arc_a] -
                            point.arc_flags[rec.arc_b] + 1);
  }
  return value;
}

std::string SelectionViolation::Describe() const {
  std::ostringstream out;
  if (kind == Kind::kFlowImbalance) {
    out << "flow imbalance at vertex " << vertex << " (outflow - inflow = "
        << net_outflow << ")";
  } else {
    out << "cycle over " << cycle.size() << " vertices:";
    for (VertexId v : cycle) out << ' ' << v;
  }
  return out.str();
}

namespace {

std::vector<VertexId> FindSelectedCycle(const Instance& instance,
                                        std::span<const uint8_t> arc_flags) {
  enum : uint8_t { kWhite, kGray, kBlack };
  const int32_t n = instance.vertex_count();
  std::vector<uint8_t> color(n, kWhite);
  // Explicit DFS stack of (vertex, next out-arc position).
  std::vector<std::pair<VertexId, size_t>> stack;
  for (VertexId root = 0; root < n; ++root) {
    if (color[root] != kWhite) continue;
    stack.emplace_back(root, 0);
    color[root] = kGray;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto outs = instance.out_arcs(v);
      if (next == outs.size()) {
        color[v] = kBlack;
        stack.pop_back();
        continue;
      }
      const ArcIndex a = outs[next++];
      if (!arc_flags[a]) continue;
      const VertexId w = instance.arc(a).head;
      if (color[w] == kGray) {
        std::vector<VertexId> cycle;
        auto it = std::find_if(stack.begin(), stack.end(),
                               [w](const auto& frame) { return frame.first == w; });
        for (; it != stack.end(); ++it) cycle.push_back(it->first);
        return cycle;
      }
      if (color[w] == kWhite) {
        color[w] = kGray;
        stack.emplace_back(w, 0);
      }
    }
  }
  return {};
}

}  // namespace

SelectionResult ValidateSelection(const Instance& instance,
                                  std::span<const uint8_t> arc_flags) {
  if (arc_flags.size() != static_cast<size_t>(instance.arc_count())) {
    throw std::invalid_argument("one flag per arc expected");
  }
  const int32_t n = instance.vertex_count();
  std::vector<int32_t> net(n, 0);
  for (ArcIndex a = 0; a < instance.arc_count(); ++a) {
    if (!arc_flags[a]) continue;
    ++net[instance.arc(a).tail];
    --net[instance.arc(a).head];
  }
  auto expected = [&](VertexId v) {
    return v == instance.source() ? 1 : v == instance.sink() ? -1 : 0;
  };
  std::vector<VertexId> order = {instance.source(), instance.sink()};
  for (VertexId v = 0; v < n; ++v) {
    if (v != instance.source() && v != instance.sink()) order.push_back(v);
  }
  for (VertexId v : order) {
    if (net[v] != expected(v)) {
      SelectionViolation violation;
      violation.kind = SelectionViolation::Kind::kFlowImbalance;
      violation.vertex = v;
      violation.net_outflow = net[v];
      return violation;
    }
  }

  std::vector<VertexId> cycle = FindSelectedCycle(instance, arc_flags);
  if (!cycle.empty()) {
    SelectionViolation violation;
    violation.kind = SelectionViolation::Kind::kCycle;
    violation.cycle = std::move(cycle);
    return violation;
  }

  // Balanced and acyclic: the selection is exactly one simple path.
  std::vector<VertexId> path = {instance.source()};
  while (path.back() != instance.sink()) {
    const VertexId v = path.back();
    const auto outs = instance.out_arcs(v);
    auto it = std::find_if(outs.begin(), outs.end(),
                           [&](ArcIndex a) { return arc_flags[a] != 0; });
    if (it == outs.end()) throw std::logic_error("balanced selection lost its path");
    path.push_back(instance.arc(*it).head);
  }
  return Evaluate(instance, path);
}

}  // namespace spedac
