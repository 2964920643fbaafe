#include "spedac/model_export.h"

#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "spedac/solvers.h"
#include "test_instances.h"

namespace spedac {
namespace {

using ::testing::Contains;
using ::testing::IsEmpty;
using namespace spedac::testing;

Assignment ZeroAssignment(const ExportedModel& model) {
  Assignment point;
  for (const ModelVariable& var : model.variables) point[var.name] = {0, 1};
  return point;
}

// Integer u satisfying every ordering row for the selection `flags`, or
// nullopt. Each row u_j - u_i >= 1 - n + n x_ij is a difference constraint
// u_i - u_j <= n - 1 - n x_ij; with 0 <= u <= n - 1 and u_s = 0 they are
// solved by Bellman-Ford from an auxiliary zero vertex.
std::optional<std::vector<int64_t>> OrderingPotentials(
    const Instance& instance, const std::vector<uint8_t>& flags) {
  const int32_t n = instance.vertex_count();
  const int32_t zero = n;
  struct Edge {
    int32_t from, to;
    int64_t length;
  };
  std::vector<Edge> edges;
  for (ArcIndex a = 0; a < instance.arc_count(); ++a) {
    const ArcRecord& arc = instance.arc(a);
    if (arc.head == instance.source()) continue;
    edges.push_back({arc.head, arc.tail, n - 1 - n * static_cast<int64_t>(flags[a])});
  }
  for (VertexId v = 0; v < n; ++v) {
    const int64_t upper = v == instance.source() ? 0 : n - 1;
    edges.push_back({zero, v, upper});  // u_v - zero <= upper
    edges.push_back({v, zero, 0});      // zero - u_v <= 0
  }
  std::vector<int64_t> dist(n + 1, 0);
  for (int32_t round = 0; round <= n + 1; ++round) {
    bool changed = false;
    for (const Edge& e : edges) {
      if (dist[e.from] + e.length < dist[e.to]) {
        dist[e.to] = dist[e.from] + e.length;
        changed = true;
      }
    }
    if (!changed) {
      std::vector<int64_t> u(n);
      for (VertexId v = 0; v < n; ++v) u[v] = dist[v] - dist[zero];
      return u;
    }
  }
  return std::nullopt;
}

TEST(ExportFlowModelTest, WorkedExampleCatalog) {
  const Instance instance = WorkedExampleInstance();
  const ExportedModel model = ExportFlowModel(instance, SecMode::kMtz);
  EXPECT_EQ(model.objective_constant, 30);
  EXPECT_EQ(model.variables.size(), 12u + 3u + 7u);
  EXPECT_EQ(model.variables.front().name, "x_0_1");
  EXPECT_EQ(model.variables[12].name, "y_0");
  EXPECT_EQ(model.variables.back().name, "u_6");
  EXPECT_EQ(model.Find("x_2_5"), 6);
  EXPECT_EQ(model.Find("x_5_2"), -1);
  EXPECT_EQ(ToString(SecMode::kOmit), "omit");
  EXPECT_EQ(ParseSecMode("mtz"), SecMode::kMtz);
  EXPECT_THROW(ParseSecMode("dfj"), std::invalid_argument);
}

TEST(ExportFlowModelTest, ZeroPointCostsTotalPenaltyButViolatesFlow) {
  const ExportedModel model = ExportFlowModel(WorkedExampleInstance(), SecMode::kMtz);
  const ModelCheck check = VerifyModelAtPoint(model, ZeroAssignment(model));
  EXPECT_EQ(check.objective, (Rational{30, 1}));
  EXPECT_THAT(check.violated, Contains("flow_0"));
  EXPECT_THAT(check.violated, Contains("flow_6"));
}

TEST(ExportFlowModelTest, OptimalPointIsFeasibleWithObjectiveSeven) {
  const Instance instance = WorkedExampleInstance();
  for (SecMode mode : {SecMode::kMtz, SecMode::kOmit}) {
    const ExportedModel model = ExportFlowModel(instance, mode);
    const PathSolution path = Evaluate(instance, std::vector{kS, kA, kC, kD, kT});
    const ModelCheck check = VerifyModelAtPoint(model, InducedAssignment(instance, model, path));
    EXPECT_THAT(check.violated, IsEmpty());
    EXPECT_EQ(check.objective, (Rational{7, 1}));
  }
}

TEST(ExportFlowModelTest, NoConflictsMeansNoPenaltyVariables) {
  const Instance base = WorkedExampleInstance();
  const Instance instance(7, base.arcs(), {}, kS, kT);
  const ExportedModel model = ExportFlowModel(instance, SecMode::kOmit);
  EXPECT_EQ(model.objective_constant, 0);
  EXPECT_EQ(model.variables.size(), 12u);
  for (const ModelVariable& var : model.variables) EXPECT_EQ(var.name[0], 'x');
}

TEST(VerifyModelAtPointTest, ReportsWrongPenaltyFlag) {
  const Instance instance = WorkedExampleInstance();
  const ExportedModel model = ExportFlowModel(instance, SecMode::kMtz);
  const PathSolution path = Evaluate(instance, std::vector{kS, kB, kA, kD, kT});
  Assignment point = InducedAssignment(instance, model, path);
  EXPECT_THAT(VerifyModelAtPoint(model, point).violated, IsEmpty());
  EXPECT_EQ(VerifyModelAtPoint(model, point).objective, (Rational{35, 1}));
  point["y_2"] = {0, 1};  // green: both arcs used, so y must be 1
  EXPECT_THAT(VerifyModelAtPoint(model, point).violated, ::testing::ElementsAre("both_2"));
  point["y_2"] = {1, 2};
  EXPECT_THAT(VerifyModelAtPoint(model, point).violated,
              ::testing::ElementsAre("both_2", "integrality:y_2"));
}

TEST(VerifyModelAtPointTest, MissingVariableThrows) {
  const ExportedModel model = ExportFlowModel(WorkedExampleInstance(), SecMode::kMtz);
  Assignment point = ZeroAssignment(model);
  point.erase("u_3");
  EXPECT_THROW(VerifyModelAtPoint(model, point), MissingVariable);
}

TEST(RationalTest, Parse) {
  EXPECT_EQ(Rational::Parse("3"), (Rational{3, 1}));
  EXPECT_EQ(Rational::Parse("-2"), (Rational{-2, 1}));
  EXPECT_EQ(Rational::Parse("0.25"), (Rational{1, 4}));
  EXPECT_EQ(Rational::Parse("2/6"), (Rational{1, 3}));
  EXPECT_THROW(Rational::Parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::Parse("abc"), std::invalid_argument);
}

TEST(ParseAssignmentTest, CommentsAndWhitespace) {
  const Assignment point = ParseAssignment("# point\nx_0_1 = 1\n y_0=0.5 # half\n\n");
  ASSERT_EQ(point.size(), 2u);
  EXPECT_EQ(point.at("x_0_1"), (Rational{1, 1}));
  EXPECT_EQ(point.at("y_0"), (Rational{1, 2}));
  EXPECT_THROW(ParseAssignment("x_0_1\n"), std::invalid_argument);
}

TEST(DecodeArcFlagsTest, ReadsBackInducedPath) {
  const Instance instance = WorkedExampleInstance();
  const ExportedModel model = ExportFlowModel(instance, SecMode::kMtz);
  const PathSolution path = Evaluate(instance, std::vector{kS, kA, kC, kD, kT});
  EXPECT_EQ(DecodeArcFlags(instance, InducedAssignment(instance, model, path)),
            IncidenceOf(instance, path).arc_flags);
}

// Every x in {0,1}^m: the mtz model admits (x, AND(x), some u) iff x is a
// simple source-sink path, and then its objective equals Evaluate().
void ExpectMtzExact(const Instance& instance) {
  const ExportedModel model = ExportFlowModel(instance, SecMode::kMtz);
  const int32_t m = instance.arc_count();
  ASSERT_LE(m, 16);
  int accepted = 0;
  for (uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<uint8_t> flags(m);
    for (ArcIndex a = 0; a < m; ++a) flags[a] = (mask >> a) & 1;
    const SelectionResult truth = ValidateSelection(instance, flags);
    const bool is_path = std::holds_alternative<PathSolution>(truth);

    Assignment point = ZeroAssignment(model);
    for (ArcIndex a = 0; a < m; ++a) {
      point[model.variables[a].name] = {flags[a], 1};
    }
    for (ConflictIndex c = 0; c < instance.conflict_count(); ++c) {
      const ConflictRecord& rec = instance.conflict(c);
      point["y_" + std::to_string(c)] = {flags[rec.arc_a] & flags[rec.arc_b], 1};
    }
    const auto u = OrderingPotentials(instance, flags);
    if (u) {
      for (VertexId v = 0; v < instance.vertex_count(); ++v) {
        point["u_" + std::to_string(v)] = {(*u)[v], 1};
      }
    }
    const ModelCheck check = VerifyModelAtPoint(model, point);
    const bool model_feasible = u.has_value() && check.violated.empty();
    ASSERT_EQ(model_feasible, is_path) << "mask " << mask;
    if (is_path) {
      ++accepted;
      EXPECT_EQ(check.objective, (Rational{std::get<PathSolution>(truth).objective(), 1}));
    }
  }
  EXPECT_EQ(accepted, OracleSolve(instance).path_count);
}

TEST(MtzSoundnessTest, WorkedExampleExhaustive) { ExpectMtzExact(WorkedExampleInstance()); }

TEST(MtzSoundnessTest, CycleThroughSourceIsExcluded) {
  // s=0 -> 1 -> 0 would otherwise ride along with the path 0 -> 2.
  const Instance instance(3, {{0, 1, 1}, {1, 0, 1}, {0, 2, 1}, {1, 2, 5}}, {{0, 2, 3}},
                          0, 2);
  ExpectMtzExact(instance);
}

TEST(MtzSoundnessTest, RandomInstancesExhaustive) {
  int checked = 0;
  for (uint64_t seed = 1; checked < 6; ++seed) {
    const Instance instance = SmallRandomInstance(5, 0.6, 6, {1, 20}, seed);
    if (instance.arc_count() > 13) continue;
    ExpectMtzExact(instance);
    ++checked;
  }
}

TEST(OmitModeTest, AdmitsPathPlusDisjointCycle) {
  const Instance instance(5, {{0, 1, 1}, {2, 3, 1}, {3, 4, 1}, {4, 2, 1}}, {}, 0, 1);
  const ExportedModel model = ExportFlowModel(instance, SecMode::kOmit);
  Assignment point;
  for (const ModelVariable& var : model.variables) point[var.name] = {1, 1};
  EXPECT_THAT(VerifyModelAtPoint(model, point).violated, IsEmpty());
  EXPECT_TRUE(std::holds_alternative<SelectionViolation>(
      ValidateSelection(instance, std::vector<uint8_t>{1, 1, 1, 1})));
  // The mtz model rejects the same arcs for every u.
  EXPECT_FALSE(OrderingPotentials(instance, {1, 1, 1, 1}).has_value());
}

TEST(CircuitFormTest, WorkedExampleOptimalPath) {
  const Instance instance = WorkedExampleInstance();
  const CircuitForm form = ToCircuitForm(instance);
  EXPECT_EQ(form.arcs.size(), 12u + 1u + 5u);
  EXPECT_EQ(form.artificial, 12);
  EXPECT_EQ(form.SelfLoopOf(kS), -1);
  EXPECT_EQ(form.SelfLoopOf(kT), -1);
  EXPECT_EQ(form.SelfLoopOf(kA), 13);
  const PathSolution path = Evaluate(instance, std::vector{kS, kA, kC, kD, kT});
  const std::vector<uint8_t> flags = CircuitSelectionForPath(form, path);
  EXPECT_TRUE(IsCircuitFeasible(form, flags));
  EXPECT_EQ(flags[form.SelfLoopOf(kB)], 1);
  EXPECT_EQ(flags[form.SelfLoopOf(kE)], 1);
  EXPECT_EQ(flags[form.SelfLoopOf(kA)], 0);
  EXPECT_EQ(flags[form.artificial], 1);
  EXPECT_EQ(StripCircuit(form, flags), IncidenceOf(instance, path).arc_flags);
}

TEST(CircuitFormTest, RejectsBrokenCircuits) {
  const Instance instance = WorkedExampleInstance();
  const CircuitForm form = ToCircuitForm(instance);
  const PathSolution path = Evaluate(instance, std::vector{kS, kA, kC, kD, kT});
  std::vector<uint8_t> flags = CircuitSelectionForPath(form, path);
  flags[form.artificial] = 0;
  EXPECT_FALSE(IsCircuitFeasible(form, flags));
  flags = CircuitSelectionForPath(form, path);
  flags[form.SelfLoopOf(kB)] = 0;  // b neither looped nor visited
  EXPECT_FALSE(IsCircuitFeasible(form, flags));
  flags = CircuitSelectionForPath(form, path);
  flags[form.SelfLoopOf(kA)] = 1;  // a looped and visited
  EXPECT_FALSE(IsCircuitFeasible(form, flags));
}

TEST(CircuitFormTest, RoundTripsEveryPath) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance instance = SmallRandomInstance(8, 0.3, 10, {1, 20}, seed);
    const CircuitForm form = ToCircuitForm(instance);
    ForEachSimplePath(instance, [&](std::span<const VertexId> vertices) {
      const PathSolution path = Evaluate(instance, vertices);
      const std::vector<uint8_t> flags = CircuitSelectionForPath(form, path);
      ASSERT_TRUE(IsCircuitFeasible(form, flags));
      const SelectionResult back = ValidateSelection(instance, StripCircuit(form, flags));
      ASSERT_TRUE(std::holds_alternative<PathSolution>(back));
      EXPECT_EQ(std::get<PathSolution>(back), path);
    });
  }
}

TEST(RenderLpTest, StableAndWellFormed) {
  const Instance instance = WorkedExampleInstance();
  const std::string first = RenderLp(ExportFlowModel(instance, SecMode::kMtz));
  const std::string second = RenderLp(ExportFlowModel(WorkedExampleInstance(), SecMode::kMtz));
  EXPECT_EQ(first, second);
  EXPECT_EQ(first.find('\r'), std::string::npos);
  for (const char* section : {"\nMinimize\n", "\nSubject To\n", "\nBounds\n", "\nBinaries\n",
                              "\nEnd\n"}) {
    EXPECT_NE(first.find(section), std::string::npos) << section;
  }
  EXPECT_NE(first.find("sec-mode: mtz"), std::string::npos);
  const std::string omitted = RenderLp(ExportFlowModel(instance, SecMode::kOmit));
  EXPECT_NE(omitted.find("WARNING"), std::string::npos);
  EXPECT_EQ(omitted.find("mtz_"), std::string::npos);
  EXPECT_NE(first.find("mtz_0_1"), std::string::npos);
}

TEST(InstanceHashTest, SensitiveToData) {
  EXPECT_EQ(InstanceHash(WorkedExampleInstance()), InstanceHash(WorkedExampleInstance()));
  EXPECT_NE(InstanceHash(WorkedExampleInstance(10)), InstanceHash(WorkedExampleInstance(11)));
}

}  // namespace
}  // namespace spedac
