// Problem data model for the shortest path problem with exclusive-disjunction
// arc-pair conflicts: a directed graph, a set of conflicting arc pairs with
// penalties, and a source/sink. A conflict is satisfied only when exactly one
// of its two arcs is on the path; otherwise its penalty is paid.

#ifndef SPEDAC_CORE_H_
#define SPEDAC_CORE_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace spedac {

using VertexId = int32_t;
using ArcIndex = int32_t;
using ConflictIndex = int32_t;
using Cost = int64_t;

// Sentinel for "no path" / "no incumbent". Large enough to never be reached by
// a real objective, small enough that adding a few weights does not overflow.
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max() / 4;

// Instance data violates one of the model invariants. The message names the
// violated rule ("duplicate arc", "arc index out of range", ...).
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A vertex sequence handed to Evaluate() is not a simple source-sink path of
// the instance. Always a caller bug.
class MalformedPath : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ArcRecord {
  VertexId tail = 0;
  VertexId head = 0;
  Cost weight = 0;

  friend bool operator==(const ArcRecord&, const ArcRecord&) = default;
};

struct ConflictRecord {
  ArcIndex arc_a = 0;
  ArcIndex arc_b = 0;
  Cost penalty = 1;

  friend bool operator==(const ConflictRecord&, const ConflictRecord&) = default;
};

// Immutable problem instance. The constructor validates every invariant and
// builds the adjacency indices used by the solvers.
class Instance {
 public:
  Instance(int32_t vertex_count, std::vector<ArcRecord> arcs,
           std::vector<ConflictRecord> conflicts, VertexId source,
           VertexId sink);

  int32_t vertex_count() const { return vertex_count_; }
  int32_t arc_count() const { return static_cast<int32_t>(arcs_.size()); }
  int32_t conflict_count() const {
    return static_cast<int32_t>(conflicts_.size());
  }
  VertexId source() const { return source_; }
  VertexId sink() const { return sink_; }

  const std::vector<ArcRecord>& arcs() const { return arcs_; }
  const std::vector<ConflictRecord>& conflicts() const { return conflicts_; }
  const ArcRecord& arc(ArcIndex a) const { return arcs_[a]; }
  const ConflictRecord& conflict(ConflictIndex c) const {
    return conflicts_[c];
  }

  std::span<const ArcIndex> out_arcs(VertexId v) const { return out_arcs_[v]; }
  std::span<const ArcIndex> in_arcs(VertexId v) const { return in_arcs_[v]; }
  // Conflicts in which arc `a` participates, ascending.
  std::span<const ConflictIndex> conflicts_of(ArcIndex a) const {
    return conflicts_of_arc_[a];
  }
  // The other arc of conflict `c`, seen from arc `a`.
  ArcIndex partner(ConflictIndex c, ArcIndex a) const {
    const ConflictRecord& rec = conflicts_[c];
    return rec.arc_a == a ? rec.arc_b : rec.arc_a;
  }

  std::optional<ArcIndex> FindArc(VertexId tail, VertexId head) const;

  // Sum of all conflict penalties: the objective of the empty selection.
  Cost TotalPenalty() const;

  friend bool operator==(const Instance& lhs, const Instance& rhs) {
    return lhs.vertex_count_ == rhs.vertex_count_ &&
           lhs.source_ == rhs.source_ && lhs.sink_ == rhs.sink_ &&
           lhs.arcs_ == rhs.arcs_ && lhs.conflicts_ == rhs.conflicts_;
  }

 private:
  int32_t vertex_count_;
  std::vector<ArcRecord> arcs_;
  std::vector<ConflictRecord> conflicts_;
  VertexId source_;
  VertexId sink_;

  std::vector<std::vector<ArcIndex>> out_arcs_;
  std::vector<std::vector<ArcIndex>> in_arcs_;
  std::vector<std::vector<ConflictIndex>> conflicts_of_arc_;
  std::unordered_map<int64_t, ArcIndex> arc_lookup_;
};

struct PathSolution {
  std::vector<VertexId> vertices;
  std::vector<ArcIndex> arc_indices;
  Cost arc_cost = 0;
  Cost penalty_cost = 0;
  std::vector<ConflictIndex> violated_conflicts;  // ascending

  Cost objective() const { return arc_cost + penalty_cost; }

  friend bool operator==(const PathSolution&, const PathSolution&) = default;
};

// x (one flag per arc) and y (one flag per conflict) of the linear model.
struct IncidenceVector {
  std::vector<uint8_t> arc_flags;
  std::vector<uint8_t> penalty_flags;
};

// The penalty term p * (2y - x_a - x_b + 1) with y = x_a AND x_b.
constexpr Cost ConflictPenaltyTerm(bool x_a, bool x_b, Cost penalty) {
  const int y = (x_a && x_b) ? 1 : 0;
  return penalty * (2 * y - static_cast<int>(x_a) - static_cast<int>(x_b) + 1);
}

// Scores a simple source-sink vertex sequence. Throws MalformedPath.
PathSolution Evaluate(const Instance& instance,
                      std::span<const VertexId> vertices);

// x from the path's arcs, y set to the AND of each conflict's arc flags.
IncidenceVector IncidenceOf(const Instance& instance,
                            const PathSolution& solution);

// Linear objective evaluated directly on (x, y), term by term.
Cost LinearObjective(const Instance& instance, const IncidenceVector& point);

struct SelectionViolation {
  enum class Kind { kFlowImbalance, kCycle };
  Kind kind = Kind::kFlowImbalance;
  // kFlowImbalance: the first vertex whose outflow - inflow is wrong.
  VertexId vertex = -1;
  int32_t net_outflow = 0;
  // kCycle: vertex set S of a directed cycle of selected arcs, in cycle order.
  // The selected arcs inside S number at least |S|, violating the subtour
  // elimination inequality for S.
  std::vector<VertexId> cycle;

  std::string Describe() const;
};

using SelectionResult = std::variant<PathSolution, SelectionViolation>;

// Accepts `arc_flags` iff the selected arcs form exactly one simple
// source-sink path and nothing else. Throws std::invalid_argument when the
// flag count does not match the arc count.
SelectionResult ValidateSelection(const Instance& instance,
                                  std::span<const uint8_t> arc_flags);

}  // namespace spedac

#endif  // SPEDAC_CORE_H_
