// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spedac/bench.h"
#include "spedac/core.h"
#include "spedac/generators.h"
#include "spedac/instance_io.h"
#include "spedac/model_export.h"
#include "spedac/solvers.h"
#include "test_instances.h"

namespace spedac {
namespace {

using namespace spedac::testing;
using Clock = std::chrono::steady_clock;

// Pinned limits.
constexpr double kWorkedExampleSeconds = 1.0;
constexpr double kSweepSeconds = 60.0;
constexpr int kSweepInstances = 208;
constexpr int kEmptyConflictInstances = 50;
constexpr int kTruthTablePenalties = 100;
constexpr int kExportInstances = 50;
constexpr int kDeterminismRuns = 3;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", value);
  return buffer;
}

Outcome WorkedExampleGolden() {
  const auto start = Clock::now();
  const Instance instance = WorkedExampleInstance(10);
  const std::vector<VertexId> expected = {kS, kA, kC, kD, kT};
  const SolveReport bb = BranchAndBound(instance);
  const SolveReport bf = BruteForce(instance);
  const SolveReport ls = LocalSearch(instance);
  const double seconds = SecondsSince(start);
  Outcome out;
  for (const SolveReport* report : {&bb, &bf, &ls}) {
    if (!report->incumbent || report->upper_bound != 7 ||
        report->incumbent->vertices != expected ||
        !report->incumbent->violated_conflicts.empty()) {
      out.pass = false;
    }
  }
  if (bb.incumbent != bf.incumbent || bb.status != SolveStatus::kOptimal ||
      bf.status != SolveStatus::kOptimal) {
    out.pass = false;
  }
  if (seconds >= kWorkedExampleSeconds) out.pass = false;
  out.detail = "bb=" + std::to_string(bb.upper_bound) + " bf=" + std::to_string(bf.upper_bound) +
               " heur=" + std::to_string(ls.upper_bound) + " path s,a,c,d,t, " + Fmt(seconds) +
               "s";
  return out;
}

Outcome OracleSweep() {
  const auto start = Clock::now();
  int total = 0, agree = 0, oracle_agree = 0;
  uint64_t seed = 1;
  while (total < kSweepInstances) {
    for (int32_t n : {6, 8, 10, 12}) {
      for (double d : {0.2, 0.4}) {
        for (IntRange penalties : {IntRange{1, 20}, IntRange{25, 200}}) {
          if (total == kSweepInstances) break;
          const Instance instance = SmallRandomInstance(n, d, 15, penalties, seed++);
          const SolveReport bb = BranchAndBound(instance);
          const SolveReport bf = BruteForce(instance);
          if (bb.status == SolveStatus::kOptimal && bb.upper_bound == bf.upper_bound) ++agree;
          if (bf.upper_bound == OracleSolve(instance).optimum) ++oracle_agree;
          ++total;
        }
      }
    }
  }
  const double seconds = SecondsSince(start);
  Outcome out;
  out.pass = agree == total && oracle_agree == total && seconds < kSweepSeconds;
  out.detail = std::to_string(agree) + "/" + std::to_string(total) +
               " bb==bf, brute force matches independent enumerator on " +
               std::to_string(oracle_agree) + ", " + Fmt(seconds) + "s";
  return out;
}

Outcome EmptyConflictReduction() {
  int agree = 0;
  for (int i = 0; i < kEmptyConflictInstances; ++i) {
    const int32_t n = 6 + 2 * (i % 4);
    const Instance instance = SmallRandomInstance(n, i % 2 ? 0.4 : 0.2, 0, {1, 1}, 5000 + i);
    const Cost dijkstra = Dijkstra(instance, false).distance[instance.sink()];
    const SolveReport bb = BranchAndBound(instance);
    if (instance.conflict_count() == 0 && bb.upper_bound == dijkstra) ++agree;
  }
  return {agree == kEmptyConflictInstances,
          std::to_string(agree) + "/" + std::to_string(kEmptyConflictInstances) +
              " equal to Dijkstra distance"};
}

Outcome PenaltyTruthTable() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<Cost> draw(1, 1'000'000'000);
  int checked = 0, ok = 0;
  std::vector<Cost> penalties = {10};
  for (int i = 0; i < kTruthTablePenalties; ++i) penalties.push_back(draw(rng));
  for (Cost p : penalties) {
    for (int a = 0; a <= 1; ++a) {
      for (int b = 0; b <= 1; ++b) {
        ++checked;
        if (ConflictPenaltyTerm(a, b, p) == p * (1 - (a ^ b))) ++ok;
      }
    }
  }
  return {ok == checked, std::to_string(ok) + "/" + std::to_string(checked) + " combinations"};
}

Outcome GeneratorCounts() {
  int configs = 0, ok = 0;
  std::string first_failure;
  for (int64_t n : {100, 200, 300, 400, 500}) {
    const std::vector<int64_t> r_units = n == 100   ? std::vector<int64_t>{100, 200, 300}
                                         : n == 200 ? std::vector<int64_t>{10, 20, 30}
                                                    : std::vector<int64_t>{1, 2, 3};
    for (int64_t density : {10, 20, 30}) {
      const int64_t m = density * n * (n - 1) / 100;
      for (int64_t r : r_units) {
        RandomConfig config;
        config.n = static_cast<int32_t>(n);
        config.d = density / 100.0;
        config.r = r * 1e-5;
        config.seed = static_cast<uint64_t>(n + density + r);
        const Instance instance = GenerateRandom(config);
        const int64_t c = r * m * (m - 1) / 200000;
        ++configs;
        if (instance.arc_count() == m && instance.conflict_count() == c) {
          ++ok;
        } else if (first_failure.empty()) {
          first_failure = " first failure random n=" + std::to_string(n);
        }
      }
    }
    for (int64_t k : {15, 30, 45}) {
      const int64_t degree = 2 * ((k * n + 100) / 200);
      const int64_t m = n * degree;
      for (int64_t r : r_units) {
        SmallWorldConfig config;
        config.n = static_cast<int32_t>(n);
        config.k = k / 100.0;
        config.r = r * 1e-5;
        config.seed = static_cast<uint64_t>(n + k + r);
        const Instance instance = GenerateSmallWorld(config);
        const int64_t c = r * m * (m - 1) / 200000;
        ++configs;
        if (instance.arc_count() == m && instance.conflict_count() == c) {
          ++ok;
        } else if (first_failure.empty()) {
          first_failure = " first failure smallworld n=" + std::to_string(n);
        }
      }
    }
  }
  RandomConfig worked;
  const bool worked_ok = GenerateRandom(worked).arc_count() == 990;
  return {ok == configs && worked_ok,
          std::to_string(ok) + "/" + std::to_string(configs) +
              " grid configs exact, n=100 d=0.1 gives " + (worked_ok ? "990" : "wrong") +
              " arcs" + first_failure};
}

Outcome ExportCrossCheck() {
  int ok = 0;
  for (int i = 0; i < kExportInstances; ++i) {
    const int32_t n = 6 + 2 * (i % 3);
    const Instance instance =
        SmallRandomInstance(n, 0.4, 12, i % 2 ? IntRange{25, 200} : IntRange{1, 20}, 9000 + i);
    const SolveReport oracle = BruteForce(instance);
    if (!oracle.incumbent) continue;
    const PathSolution& best = *oracle.incumbent;
    const Rational expected{best.objective(), 1};

    const ExportedModel mtz = ExportFlowModel(instance, SecMode::kMtz);
    const ModelCheck at_mtz = VerifyModelAtPoint(mtz, InducedAssignment(instance, mtz, best));

    const CircuitForm form = ToCircuitForm(instance);
    const std::vector<uint8_t> circuit = CircuitSelectionForPath(form, best);
    const SelectionResult decoded = ValidateSelection(instance, StripCircuit(form, circuit));
    bool circuit_ok = IsCircuitFeasible(form, circuit) &&
                      std::holds_alternative<PathSolution>(decoded);
    if (circuit_ok) {
      const ModelCheck at_circuit = VerifyModelAtPoint(
          mtz, InducedAssignment(instance, mtz, std::get<PathSolution>(decoded)));
      circuit_ok = at_circuit.violated.empty() && at_circuit.objective == expected;
    }

    Cost below = 0;
    ForEachSimplePath(instance, [&](std::span<const VertexId> path) {
      const PathSolution candidate = Evaluate(instance, path);
      const ModelCheck check =
          VerifyModelAtPoint(mtz, InducedAssignment(instance, mtz, candidate));
      if (check.objective.num < expected.num) ++below;
    });
    if (at_mtz.violated.empty() && at_mtz.objective == expected && circuit_ok && below == 0 &&
        OracleSolve(instance).optimum == best.objective()) {
      ++ok;
    }
  }
  return {ok == kExportInstances,
          std::to_string(ok) + "/" + std::to_string(kExportInstances) +
              " optimal points verified, no enumerated path below the model optimum"};
}

std::filesystem::path MakeDeskDirectory(const std::filesystem::path& dir) {
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (int32_t n : {8, 10, 12}) {
    for (double d : {0.2, 0.4}) {
      for (uint64_t seed : {1, 2, 3}) {
        RandomConfig config;
        config.n = n;
        config.d = d;
        config.r = 0.02;
        config.penalty_range = {25, 125};
        config.seed = seed;
        WriteTextFile(dir / FormatInstanceName(NameFor(config)),
                      RenderInstance(GenerateRandom(config)));
      }
    }
    SmallWorldConfig small;
    small.n = n;
    small.k = 0.3;
    small.r = 0.01;
    WriteTextFile(dir / FormatInstanceName(NameFor(small)),
                  RenderInstance(GenerateSmallWorld(small)));
  }
  return dir;
}

Outcome BenchSchema(const std::filesystem::path& scratch) {
  BenchOptions options;
  options.directory = MakeDeskDirectory(scratch / "desk");
  options.time_limit = Seconds(60);
  const std::vector<BenchRow> rows = RunBench(options);
  const std::string csv = RenderBenchCsv(rows, options);
  std::istringstream lines(csv);
  std::string comment, header, line;
  std::getline(lines, comment);
  std::getline(lines, header);
  bool pass = comment.rfind("# spedac-bench v1 method=bb", 0) == 0 &&
              header == "Set,LB,UB,Sec best,Sec tot,Opt gap %,Status,Instance,Method";
  int closed = 0, instances = 0;
  while (std::getline(lines, line)) {
    if (line.find(",Optimal,") == std::string::npos) {
      if (line.find(",mean(") == std::string::npos) pass = false;
      continue;
    }
    ++instances;
    if (line.find(",0.00000,Optimal,") != std::string::npos) ++closed;
  }
  pass = pass && instances == 21 && closed == instances;
  return {pass, std::to_string(closed) + "/" + std::to_string(instances) +
                    " desk instances closed with gap 0.00000; reference-table averages need "
                    "the original instance files and are not reproduced"};
}

std::string RunCli(const std::string& args, const std::filesystem::path& out_file) {
  const std::string command = std::string("\"") + SPEDAC_CLI_PATH + "\" " + args + " > \"" +
                              out_file.string() + "\" 2>&1";
  const int status = std::system(command.c_str());
  std::string text = std::filesystem::exists(out_file) ? ReadTextFile(out_file) : "";
  if (status != 0) text = "exit " + std::to_string(status) + "\n" + text;
  return text;
}

Outcome Determinism(const std::filesystem::path& scratch) {
  const std::filesystem::path desk = MakeDeskDirectory(scratch / "determinism_desk");
  const std::string instance = (scratch / "det_instance.spedac").string();
  RandomConfig config;
  config.n = 14;
  config.d = 0.3;
  config.r = 0.02;
  config.seed = 17;
  WriteTextFile(instance, RenderInstance(GenerateRandom(config)));

  const std::vector<std::string> commands = {
      "gen-random --n 60 --d 0.2 --r 0.001 --seed 4",
      "gen-smallworld --n 60 --k 0.3 --beta 0.5 --r 0.001 --seed 4",
      "solve --instance \"" + instance + "\" --method bb --no-timing",
      "solve --instance \"" + instance + "\" --method heur --seed 3 --no-timing",
      "export --instance \"" + instance + "\" --sec-mode mtz",
      "bench --dir \"" + desk.string() + "\" --method bb --workers 1 --no-timing",
  };
  int stable = 0;
  std::string unstable;
  for (size_t i = 0; i < commands.size(); ++i) {
    std::vector<std::string> outputs;
    for (int run = 0; run < kDeterminismRuns; ++run) {
      outputs.push_back(RunCli(commands[i], scratch / ("run_" + std::to_string(i) + "_" +
                                                       std::to_string(run) + ".txt")));
    }
    bool same = !outputs[0].empty() && outputs[0].rfind("exit ", 0) != 0;
    for (const std::string& output : outputs) same = same && output == outputs[0];
    if (same) {
      ++stable;
    } else {
      unstable += " [" + commands[i].substr(0, commands[i].find(' ')) + "]";
    }
  }
  return {stable == static_cast<int>(commands.size()),
          std::to_string(stable) + "/" + std::to_string(commands.size()) +
              " commands byte-identical over " + std::to_string(kDeterminismRuns) + " runs" +
              unstable};
}

}  // namespace
}  // namespace spedac

int main() {
  using namespace spedac;
  const std::filesystem::path scratch =
      std::filesystem::temp_directory_path() / "spedac_acceptance";
  std::filesystem::remove_all(scratch);
  std::filesystem::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"worked example golden", WorkedExampleGolden},
      {"oracle equivalence sweep", OracleSweep},
      {"degenerate reduction (no conflicts)", EmptyConflictReduction},
      {"penalty term truth table", PenaltyTruthTable},
      {"generator counts", GeneratorCounts},
      {"export cross-check", ExportCrossCheck},
      {"bench schema and closed gaps", [&] { return BenchSchema(scratch); }},
      {"determinism", [&] { return Determinism(scratch); }},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] %s: %s\n", outcome.pass ? "PASS" : "FAIL", name.c_str(),
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::filesystem::remove_all(scratch);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
