// Linear model export and self-check.
//
// The exported model is the compact flow formulation: binaries x_{i}_{j} per
// arc and y_{c} per conflict, objective
//   sum w x + sum p (2 y - x_a - x_b + 1),
// unit flow from source to sink, and the linearisation rows y >= x_a + x_b - 1,
// y <= x_a, y <= x_b. Subtours are excluded either by Miller-Tucker-Zemlin
// ordering variables u_{v} (SecMode::kMtz) or not at all (SecMode::kOmit,
// for solvers that separate subtour cuts lazily).
//
// Variable names are stable: x_<tail>_<head>, y_<conflict index>, u_<vertex>.

#ifndef SPEDAC_MODEL_EXPORT_H_
#define SPEDAC_MODEL_EXPORT_H_

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spedac/core.h"

namespace spedac {

enum class SecMode { kMtz, kOmit };

std::string ToString(SecMode mode);
SecMode ParseSecMode(std::string_view text);

class MissingVariable : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

enum class VariableKind { kBinary, kContinuous, kInteger };

struct ModelVariable {
  std::string name;
  VariableKind kind = VariableKind::kBinary;
  int64_t lower = 0;
  int64_t upper = 1;
};

struct LinearTerm {
  int32_t variable = 0;  // index into ExportedModel::variables
  int64_t coefficient = 0;
};

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct ModelRow {
  std::string name;
  std::vector<LinearTerm> terms;
  RowSense sense = RowSense::kEqual;
  int64_t rhs = 0;
};

struct ExportedModel {
  SecMode sec_mode = SecMode::kMtz;
  uint64_t instance_hash = 0;
  std::vector<ModelVariable> variables;
  std::vector<LinearTerm> objective;
  // Sum of all penalties. The LP text carries it as a coefficient on an
  // auxiliary variable fixed to 1; it is not part of `variables`.
  int64_t objective_constant = 0;
  std::vector<ModelRow> rows;

  // Index of a variable by name, or -1.
  int32_t Find(std::string_view name) const;
};

ExportedModel ExportFlowModel(const Instance& instance, SecMode sec_mode);

// CPLEX LP text: LF line endings, ASCII, sections Minimize / Subject To /
// Bounds / Binaries / End, with a header comment carrying the instance hash,
// the subtour mode and the tool version. Identical models render to identical
// bytes.
std::string RenderLp(const ExportedModel& model);

// Exact rational value (numerator / denominator, denominator > 0, reduced).
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  static Rational Parse(std::string_view text);  // "3", "-2", "0.25", "1/3"
  friend bool operator==(const Rational&, const Rational&) = default;
};

using Assignment = std::map<std::string, Rational, std::less<>>;

struct ModelCheck {
  Rational objective;
  // Names of violated rows, then "bound:<var>" and "integrality:<var>" entries.
  std::vector<std::string> violated;
};

// Evaluates every row, bound and integrality requirement exactly. Throws
// MissingVariable if the assignment lacks a catalog variable.
ModelCheck VerifyModelAtPoint(const ExportedModel& model,
                              const Assignment& assignment);

// name=value lines; '#' comments allowed.
Assignment ParseAssignment(std::string_view text);

// Full point induced by a path: x from its arcs, y = x_a AND x_b, u = position
// along the path (0 for vertices off the path).
Assignment InducedAssignment(const Instance& instance,
                             const ExportedModel& model,
                             const PathSolution& path);

// Arc flags read back from the x variables of an assignment.
std::vector<uint8_t> DecodeArcFlags(const Instance& instance,
                                    const Assignment& assignment);

// ---------------------------------------------------------------------------
// Circuit closure: an s-t path plus a fixed artificial arc (t, s) plus a
// self-loop on every vertex left off the path is a single circuit covering the
// non-self-looped vertices.

struct CircuitArc {
  enum class Kind { kReal, kArtificial, kSelfLoop };
  Kind kind = Kind::kReal;
  VertexId tail = 0;
  VertexId head = 0;
  ArcIndex arc = -1;  // kReal only
};

struct CircuitForm {
  // Real arcs first (same order as the instance), then the artificial (t, s),
  // then one self-loop per vertex other than s and t, ascending.
  std::vector<CircuitArc> arcs;
  int32_t artificial = 0;  // position of the artificial arc in `arcs`
  int32_t vertex_count = 0;
  VertexId source = 0;
  VertexId sink = 0;

  int32_t SelfLoopOf(VertexId v) const;  // position, or -1 for s and t
};

CircuitForm ToCircuitForm(const Instance& instance);

std::vector<uint8_t> CircuitSelectionForPath(const CircuitForm& form,
                                             const PathSolution& path);

// True iff the artificial arc is chosen and the chosen arcs form one circuit
// through exactly the vertices without a chosen self-loop.
bool IsCircuitFeasible(const CircuitForm& form, std::span<const uint8_t> flags);

// Drops the artificial arc and self-loops, leaving one flag per real arc.
std::vector<uint8_t> StripCircuit(const CircuitForm& form,
                                  std::span<const uint8_t> flags);

// Stable 64-bit FNV-1a hash of the rendered instance file.
uint64_t InstanceHash(const Instance& instance);

}  // namespace spedac

#endif  // SPEDAC_MODEL_EXPORT_H_
