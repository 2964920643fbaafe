#include "spedac/model_export.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "spedac/instance_io.h"

namespace spedac {
namespace {

constexpr std::string_view kConstantVariable = "obj_const";

std::string XName(const ArcRecord& arc) {
  return "x_" + std::to_string(arc.tail) + "_" + std::to_string(arc.head);
}
std::string YName(ConflictIndex c) { return "y_" + std::to_string(c); }
std::string UName(VertexId v) { return "u_" + std::to_string(v); }

using i128 = __int128;

i128 Gcd(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Exact accumulator for sums of integer * rational products.
class RationalSum {
 public:
  void Add(int64_t coefficient, const Rational& value) {
    num_ = num_ * value.den + static_cast<i128>(coefficient) * value.num * den_;
    den_ *= value.den;
    const i128 g = Gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }
  void AddInteger(int64_t value) { num_ += static_cast<i128>(value) * den_; }

  // Sign of (sum - rhs).
  int Compare(int64_t rhs) const {
    const i128 diff = num_ - static_cast<i128>(rhs) * den_;
    return diff < 0 ? -1 : diff > 0 ? 1 : 0;
  }

  Rational ToRational() const {
    if (num_ > INT64_MAX || num_ < INT64_MIN || den_ > INT64_MAX) {
      throw std::overflow_error("rational value exceeds 64 bits");
    }
    return {static_cast<int64_t>(num_), static_cast<int64_t>(den_)};
  }

 private:
  i128 num_ = 0;
  i128 den_ = 1;
};

void AppendTerm(std::string& line, bool first, int64_t coefficient,
                std::string_view name) {
  if (coefficient < 0) {
    line += "- ";
  } else if (!first) {
    line += "+ ";
  }
  const int64_t magnitude = coefficient < 0 ? -coefficient : coefficient;
  if (magnitude != 1) line += std::to_string(magnitude) + " ";
  line += name;
}

// Writes "label: terms" wrapping long expressions onto continuation lines.
void RenderExpression(std::ostringstream& out, const std::string& label,
                      const ExportedModel& model,
                      const std::vector<LinearTerm>& terms,
                      const std::string& tail) {
  std::string line = " " + label + ":";
  bool first = true;
  auto emit = [&](int64_t coefficient, std::string_view name) {
    std::string piece;
    AppendTerm(piece, first, coefficient, name);
    if (line.size() + piece.size() > 200) {
      out << line << '\n';
      line = "  ";
    } else {
      line += ' ';
    }
    line += piece;
    first = false;
  };
  for (const LinearTerm& term : terms) {
    emit(term.coefficient, model.variables[term.variable].name);
  }
  if (first) emit(0, kConstantVariable);
  out << line << tail << '\n';
}

}  // namespace

std::string ToString(SecMode mode) {
  return mode == SecMode::kMtz ? "mtz" : "omit";
}

SecMode ParseSecMode(std::string_view text) {
  if (text == "mtz") return SecMode::kMtz;
  if (text == "omit") return SecMode::kOmit;
  throw std::invalid_argument("unknown subtour mode: " + std::string(text));
}

int32_t ExportedModel::Find(std::string_view name) const {
  for (size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return static_cast<int32_t>(i);
  }
  return -1;
}

uint64_t InstanceHash(const Instance& instance) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : RenderInstance(instance)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

ExportedModel ExportFlowModel(const Instance& instance, SecMode sec_mode) {
  ExportedModel model;
  model.sec_mode = sec_mode;
  model.instance_hash = InstanceHash(instance);
  const int32_t n = instance.vertex_count();
  const int32_t m = instance.arc_count();

  // Catalog: x per arc, y per conflict, u per vertex.
  for (const ArcRecord& arc : instance.arcs()) {
    model.variables.push_back({XName(arc), VariableKind::kBinary, 0, 1});
  }
  const int32_t y_base = m;
  for (ConflictIndex c = 0; c < instance.conflict_count(); ++c) {
    model.variables.push_back({YName(c), VariableKind::kBinary, 0, 1});
  }
  const int32_t u_base = static_cast<int32_t>(model.variables.size());
  if (sec_mode == SecMode::kMtz) {
    for (VertexId v = 0; v < n; ++v) {
      const int64_t upper = v == instance.source() ? 0 : n - 1;
      model.variables.push_back({UName(v), VariableKind::kContinuous, 0, upper});
    }
  }

  // Objective: sum w x + sum p (2y - x_a - x_b + 1).
  for (ArcIndex a = 0; a < m; ++a) {
    int64_t coefficient = instance.arc(a).weight;
    for (ConflictIndex c : instance.conflicts_of(a)) {
      coefficient -= instance.conflict(c).penalty;
    }
    if (coefficient != 0) model.objective.push_back({a, coefficient});
  }
  for (ConflictIndex c = 0; c < instance.conflict_count(); ++c) {
    model.objective.push_back({y_base + c, 2 * instance.conflict(c).penalty});
  }
  model.objective_constant = instance.TotalPenalty();

  // Unit flow: outflow - inflow = +1 at s, -1 at t, 0 elsewhere.
  for (VertexId v = 0; v < n; ++v) {
    ModelRow row;
    row.name = "flow_" + std::to_string(v);
    row.sense = RowSense::kEqual;
    row.rhs = v == instance.source() ? 1 : v == instance.sink() ? -1 : 0;
    for (ArcIndex a : instance.out_arcs(v)) row.terms.push_back({a, 1});
    for (ArcIndex a : instance.in_arcs(v)) row.terms.push_back({a, -1});
    std::sort(row.terms.begin(), row.terms.end(),
              [](const LinearTerm& x, const LinearTerm& y) {
                return x.variable < y.variable;
              });
    if (row.terms.empty() && row.rhs == 0) continue;
    model.rows.push_back(std::move(row));
  }

  // Penalty linkage y = x_a AND x_b.
  for (ConflictIndex c = 0; c < instance.conflict_count(); ++c) {
    const ConflictRecord& rec = instance.conflict(c);
    const std::string suffix = std::to_string(c);
    model.rows.push_back({"both_" + suffix,
                          {{y_base + c, 1}, {rec.arc_a, -1}, {rec.arc_b, -1}},
                          RowSense::kGreaterEqual,
                          -1});
    model.rows.push_back({"only_a_" + suffix,
                          {{y_base + c, 1}, {rec.arc_a, -1}},
                          RowSense::kLessEqual,
                          0});
    model.rows.push_back({"only_b_" + suffix,
                          {{y_base + c, 1}, {rec.arc_b, -1}},
                          RowSense::kLessEqual,
                          0});
  }

  if (sec_mode == SecMode::kMtz) {
    // u_j >= u_i + 1 - n (1 - x_ij) for every arc not entering s.
    for (ArcIndex a = 0; a < m; ++a) {
      const ArcRecord& arc = instance.arc(a);
      if (arc.head == instance.source()) continue;
      model.rows.push_back({"mtz_" + std::to_string(arc.tail) + "_" +
                                std::to_string(arc.head),
                            {{u_base + arc.head, 1}, {u_base + arc.tail, -1}, {a, -n}},
                            RowSense::kGreaterEqual,
                            1 - n});
    }
    // Arcs entering s carry no ordering row, so a cycle through s would slip
    // past the u variables; a simple path never re-enters its source.
    if (!instance.in_arcs(instance.source()).empty()) {
      ModelRow row{"no_return_source", {}, RowSense::kEqual, 0};
      for (ArcIndex a : instance.in_arcs(instance.source())) row.terms.push_back({a, 1});
      model.rows.push_back(std::move(row));
    }
  }
  return model;
}

std::string RenderLp(const ExportedModel& model) {
  std::ostringstream out;
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(model.instance_hash));
  out << "\\ SP-EDAC flow model\n";
  out << "\\ instance-hash: " << hash << '\n';
  out << "\\ sec-mode: " << ToString(model.sec_mode) << '\n';
  out << "\\ tool: " << kToolVersion << '\n';
  if (model.sec_mode == SecMode::kOmit) {
    out << "\\ WARNING: subtour elimination constraints omitted; the solver must"
           " separate them lazily or integer solutions may contain cycles\n";
  }

  std::vector<LinearTerm> objective = model.objective;
  out << "Minimize\n";
  {
    // The constant rides on obj_const, fixed to 1 in Bounds.
    ExportedModel scratch;
    scratch.variables = model.variables;
    scratch.variables.push_back({std::string(kConstantVariable),
                                 VariableKind::kContinuous, 1, 1});
    objective.push_back({static_cast<int32_t>(model.variables.size()),
                         model.objective_constant});
    RenderExpression(out, "obj", scratch, objective, "");
  }

  out << "Subject To\n";
  for (const ModelRow& row : model.rows) {
    const char* sense = row.sense == RowSense::kEqual       ? " = "
                        : row.sense == RowSense::kLessEqual ? " <= "
                                                            : " >= ";
    RenderExpression(out, row.name, model, row.terms,
                     sense + std::to_string(row.rhs));
  }

  out << "Bounds\n";
  out << ' ' << kConstantVariable << " = 1\n";
  for (const ModelVariable& var : model.variables) {
    if (var.kind == VariableKind::kBinary) continue;
    if (var.lower == var.upper) {
      out << ' ' << var.name << " = " << var.lower << '\n';
    } else {
      out << ' ' << var.lower << " <= " << var.name << " <= " << var.upper << '\n';
    }
  }

  auto list_section = [&](const char* header, VariableKind kind) {
    std::string line;
    bool any = false;
    for (const ModelVariable& var : model.variables) {
      if (var.kind != kind) continue;
      if (!any) out << header << '\n';
      any = true;
      if (line.size() + var.name.size() > 200) {
        out << line << '\n';
        line.clear();
      }
      line += ' ' + var.name;
    }
    if (!line.empty()) out << line << '\n';
  };
  list_section("Binaries", VariableKind::kBinary);
  list_section("Generals", VariableKind::kInteger);
  out << "End\n";
  return out.str();
}

Rational Rational::Parse(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("bad numeric value: " + std::string(text));
  };
  if (text.empty()) return fail();
  auto parse_int = [&](std::string_view digits, int64_t& value) {
    const auto [end, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), value);
    return ec == std::errc() && end == digits.data() + digits.size();
  };
  Rational result;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    if (!parse_int(text.substr(0, slash), result.num) ||
        !parse_int(text.substr(slash + 1), result.den) || result.den == 0) {
      return fail();
    }
  } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view fraction = text.substr(dot + 1);
    if (fraction.size() > 15 || fraction.find_first_not_of("0123456789") !=
                                    std::string_view::npos) {
      return fail();
    }
    std::string whole(text.substr(0, dot));
    const bool negative = !whole.empty() && whole.front() == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (whole.front() == '+') whole.erase(0, 1);
    int64_t integral = 0;
    int64_t decimals = 0;
    if (!parse_int(whole, integral) ||
        (!fraction.empty() && !parse_int(fraction, decimals))) {
      return fail();
    }
    result.den = 1;
    for (size_t i = 0; i < fraction.size(); ++i) result.den *= 10;
    const int64_t magnitude = (integral < 0 ? -integral : integral) * result.den + decimals;
    result.num = negative ? -magnitude : magnitude;
  } else {
    std::string_view digits = text;
    if (digits.front() == '+') digits.remove_prefix(1);
    if (!parse_int(digits, result.num)) return fail();
  }
  if (result.den < 0) {
    result.num = -result.num;
    result.den = -result.den;
  }
  const int64_t g = static_cast<int64_t>(Gcd(result.num, result.den));
  if (g > 1) {
    result.num /= g;
    result.den /= g;
  }
  return result;
}

ModelCheck VerifyModelAtPoint(const ExportedModel& model,
                              const Assignment& assignment) {
  std::vector<Rational> values;
  values.reserve(model.variables.size());
  for (const ModelVariable& var : model.variables) {
    auto it = assignment.find(var.name);
    if (it == assignment.end()) throw MissingVariable("missing variable " + var.name);
    values.push_back(it->second);
  }

  ModelCheck check;
  RationalSum objective;
  for (const LinearTerm& term : model.objective) {
    objective.Add(term.coefficient, values[term.variable]);
  }
  objective.AddInteger(model.objective_constant);
  check.objective = objective.ToRational();

  for (const ModelRow& row : model.rows) {
    RationalSum lhs;
    for (const LinearTerm& term : row.terms) {
      lhs.Add(term.coefficient, values[term.variable]);
    }
    const int cmp = lhs.Compare(row.rhs);
    const bool ok = row.sense == RowSense::kEqual       ? cmp == 0
                    : row.sense == RowSense::kLessEqual ? cmp <= 0
                                                        : cmp >= 0;
    if (!ok) check.violated.push_back(row.name);
  }
  for (size_t i = 0; i < model.variables.size(); ++i) {
    const ModelVariable& var = model.variables[i];
    RationalSum value;
    value.Add(1, values[i]);
    if (value.Compare(var.lower) < 0 || value.Compare(var.upper) > 0) {
      check.violated.push_back("bound:" + var.name);
    }
    if (var.kind != VariableKind::kContinuous && values[i].den != 1) {
      check.violated.push_back("integrality:" + var.name);
    }
  }
  return check;
}

Assignment ParseAssignment(std::string_view text) {
  Assignment assignment;
  std::istringstream lines{std::string(text)};
  std::string raw;
  int line_number = 0;
  while (std::getline(lines, raw)) {
    ++line_number;
    std::string line = raw.substr(0, raw.find('#'));
    line.erase(std::remove_if(line.begin(), line.end(),
                              [](unsigned char ch) { return std::isspace(ch); }),
               line.end());
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("assignment line " + std::to_string(line_number) +
                                  ": expected name=value");
    }
    assignment[line.substr(0, eq)] = Rational::Parse(line.substr(eq + 1));
  }
  return assignment;
}

Assignment InducedAssignment(const Instance& instance,
                             const ExportedModel& model,
                             const PathSolution& path) {
  const IncidenceVector point = IncidenceOf(instance, path);
  Assignment assignment;
  for (ArcIndex a = 0; a < instance.arc_count(); ++a) {
    assignment[XName(instance.arc(a))] = {point.arc_flags[a], 1};
  }
  for (ConflictIndex c = 0; c < instance.conflict_count(); ++c) {
    assignment[YName(c)] = {point.penalty_flags[c], 1};
  }
  if (model.sec_mode == SecMode::kMtz) {
    for (VertexId v = 0; v < instance.vertex_count(); ++v) assignment[UName(v)] = {0, 1};
    for (size_t i = 0; i < path.vertices.size(); ++i) {
      assignment[UName(path.vertices[i])] = {static_cast<int64_t>(i), 1};
    }
  }
  return assignment;
}

std::vector<uint8_t> DecodeArcFlags(const Instance& instance,
                                    const Assignment& assignment) {
  std::vector<uint8_t> flags(instance.arc_count(), 0);
  for (ArcIndex a = 0; a < instance.arc_count(); ++a) {
    const std::string name = XName(instance.arc(a));
    auto it = assignment.find(name);
    if (it == assignment.end()) throw MissingVariable("missing variable " + name);
    const Rational& value = it->second;
    if (value == Rational{1, 1}) {
      flags[a] = 1;
    } else if (value != Rational{0, 1}) {
      throw std::invalid_argument("non-binary value for " + name);
    }
  }
  return flags;
}

int32_t CircuitForm::SelfLoopOf(VertexId v) const {
  if (v == source || v == sink) return -1;
  // Self-loops follow the artificial arc in ascending vertex order, skipping
  // s and t.
  int32_t rank = v;
  if (source < v) --rank;
  if (sink < v) --rank;
  return artificial + 1 + rank;
}

CircuitForm ToCircuitForm(const Instance& instance) {
  CircuitForm form;
  form.vertex_count = instance.vertex_count();
  form.source = instance.source();
  form.sink = instance.sink();
  for (ArcIndex a = 0; a < instance.arc_count(); ++a) {
    const ArcRecord& arc = instance.arc(a);
    form.arcs.push_back({CircuitArc::Kind::kReal, arc.tail, arc.head, a});
  }
  form.artificial = static_cast<int32_t>(form.arcs.size());
  form.arcs.push_back(
      {CircuitArc::Kind::kArtificial, instance.sink(), instance.source(), -1});
  for (VertexId v = 0; v < instance.vertex_count(); ++v) {
    if (v == instance.source() || v == instance.sink()) continue;
    form.arcs.push_back({CircuitArc::Kind::kSelfLoop, v, v, -1});
  }
  return form;
}

std::vector<uint8_t> CircuitSelectionForPath(const CircuitForm& form,
                                             const PathSolution& path) {
  std::vector<uint8_t> flags(form.arcs.size(), 0);
  for (ArcIndex a : path.arc_indices) flags[a] = 1;
  flags[form.artificial] = 1;
  std::vector<uint8_t> on_path(form.vertex_count, 0);
  for (VertexId v : path.vertices) on_path[v] = 1;
  for (VertexId v = 0; v < form.vertex_count; ++v) {
    if (!on_path[v] && form.SelfLoopOf(v) >= 0) flags[form.SelfLoopOf(v)] = 1;
  }
  return flags;
}

bool IsCircuitFeasible(const CircuitForm& form, std::span<const uint8_t> flags) {
  if (flags.size() != form.arcs.size() || !flags[form.artificial]) return false;
  const int32_t n = form.vertex_count;
  std::vector<int32_t> out_degree(n, 0);
  std::vector<int32_t> in_degree(n, 0);
  std::vector<VertexId> successor(n, -1);
  std::vector<uint8_t> skipped(n, 0);
  for (size_t i = 0; i < form.arcs.size(); ++i) {
    if (!flags[i]) continue;
    const CircuitArc& arc = form.arcs[i];
    if (arc.kind == CircuitArc::Kind::kSelfLoop) {
      skipped[arc.tail] = 1;
      continue;
    }
    ++out_degree[arc.tail];
    ++in_degree[arc.head];
    successor[arc.tail] = arc.head;
  }
  int32_t covered = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (skipped[v]) {
      if (out_degree[v] != 0 || in_degree[v] != 0) return false;
      continue;
    }
    if (out_degree[v] != 1 || in_degree[v] != 1) return false;
    ++covered;
  }
  int32_t length = 0;
  VertexId v = form.source;
  do {
    v = successor[v];
    ++length;
  } while (v != form.source && length <= n);
  return length == covered;
}

std::vector<uint8_t> StripCircuit(const CircuitForm& form,
                                  std::span<const uint8_t> flags) {
  std::vector<uint8_t> real;
  for (size_t i = 0; i < form.arcs.size(); ++i) {
    if (form.arcs[i].kind == CircuitArc::Kind::kReal) real.push_back(flags[i]);
  }
  return real;
}

}  // namespace spedac
