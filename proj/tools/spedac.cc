// Command-line front end: instance generation, solving, model export, the
// benchmark harness and validation.
//
// Exit codes: 0 success, 1 rejected validation or runtime failure, 2 parse or
// invariant error, 3 guard or time limit reached without an incumbent.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "spedac/bench.h"
#include "spedac/core.h"
#include "spedac/generators.h"
#include "spedac/instance_io.h"
#include "spedac/model_export.h"
#include "spedac/solvers.h"

namespace {

using namespace spedac;

constexpr int kExitRejected = 1;
constexpr int kExitParse = 2;
constexpr int kExitNoIncumbent = 3;

struct GeneratorFlags {
  std::optional<int32_t> n;
  std::optional<double> d;
  std::optional<double> k;
  std::optional<double> beta;
  std::optional<double> r;
  std::optional<Cost> penalty_lo, penalty_hi;
  std::optional<Cost> weight_lo, weight_hi;
  std::optional<uint64_t> seed;
  std::string profile;
  std::string out;
  std::string out_dir;
};

void AddCommonGeneratorFlags(CLI::App* cmd, GeneratorFlags& flags) {
  cmd->add_option("--n", flags.n, "Number of vertices");
  cmd->add_option("--r", flags.r, "Conflict density");
  cmd->add_option("--penalty-lo", flags.penalty_lo, "Smallest penalty");
  cmd->add_option("--penalty-hi", flags.penalty_hi, "Largest penalty");
  cmd->add_option("--weight-lo", flags.weight_lo, "Smallest arc weight");
  cmd->add_option("--weight-hi", flags.weight_hi, "Largest arc weight");
  cmd->add_option("--seed", flags.seed, "Random seed");
  cmd->add_option("--profile", flags.profile, "key=value profile file");
  cmd->add_option("--out", flags.out, "Output file (default stdout)");
  cmd->add_option("--out-dir", flags.out_dir,
                  "Output directory; the file name encodes the parameters");
}

template <typename Config>
void ApplyCommon(const GeneratorFlags& flags, Config& config) {
  if (flags.n) config.n = *flags.n;
  if (flags.r) config.r = *flags.r;
  if (flags.penalty_lo) config.penalty_range.lo = *flags.penalty_lo;
  if (flags.penalty_hi) config.penalty_range.hi = *flags.penalty_hi;
  if (flags.weight_lo) config.weight_range.lo = *flags.weight_lo;
  if (flags.weight_hi) config.weight_range.hi = *flags.weight_hi;
  if (flags.seed) config.seed = *flags.seed;
}

template <typename Config>
Config LoadProfile(const GeneratorFlags& flags) {
  if (flags.profile.empty()) return Config{};
  GeneratorConfig parsed = ParseProfile(ReadTextFile(flags.profile));
  if (!std::holds_alternative<Config>(parsed)) {
    throw std::invalid_argument("profile family does not match the subcommand");
  }
  return std::get<Config>(parsed);
}

void Emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    WriteTextFile(out, text);
  }
}

template <typename Config>
void WriteGenerated(const Instance& instance, const Config& config,
                    const GeneratorFlags& flags) {
  const std::string text = RenderInstance(instance);
  if (!flags.out_dir.empty()) {
    std::filesystem::create_directories(flags.out_dir);
    const auto path =
        std::filesystem::path(flags.out_dir) / FormatInstanceName(NameFor(config));
    WriteTextFile(path, text);
    std::cout << path.string() << '\n';
  } else {
    Emit(text, flags.out);
  }
}

std::string FormatSeconds(Seconds s, bool timing) {
  if (!timing) return "NA";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", s.count());
  return buffer;
}

std::string FormatCost(Cost c) {
  return c >= kInfiniteCost ? "inf" : std::to_string(c);
}

std::string RenderReport(const SolveReport& report, const std::string& method,
                         bool timing) {
  std::ostringstream out;
  out << "method: " << method << '\n';
  out << "status: " << ToString(report.status) << '\n';
  out << "lower_bound: " << FormatCost(report.lower_bound) << '\n';
  out << "upper_bound: " << FormatCost(report.upper_bound) << '\n';
  if (report.upper_bound < kInfiniteCost) {
    char gap[32];
    std::snprintf(gap, sizeof(gap), "%.5f", OptimalityGap(report));
    out << "gap_percent: " << gap << '\n';
  } else {
    out << "gap_percent: NA\n";
  }
  if (report.incumbent) {
    const PathSolution& best = *report.incumbent;
    out << "objective: " << best.objective() << '\n';
    out << "arc_cost: " << best.arc_cost << '\n';
    out << "penalty_cost: " << best.penalty_cost << '\n';
    out << "violated_conflicts:";
    for (ConflictIndex c : best.violated_conflicts) out << ' ' << c;
    out << '\n';
    out << "path:";
    for (VertexId v : best.vertices) out << ' ' << v;
    out << '\n';
  }
  out << "nodes: " << report.nodes_explored << '\n';
  out << "seconds_best: " << FormatSeconds(report.seconds_to_best, timing) << '\n';
  out << "seconds_total: " << FormatSeconds(report.seconds_total, timing) << '\n';
  return out.str();
}

std::vector<VertexId> ParseVertexList(const std::string& text) {
  std::vector<VertexId> vertices;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    size_t used = 0;
    const long value = std::stol(token, &used);
    if (used != token.size()) throw std::invalid_argument("bad vertex id: " + token);
    vertices.push_back(static_cast<VertexId>(value));
  }
  return vertices;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shortest paths with exclusive-disjunction arc-pair conflicts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  GeneratorFlags random_flags;
  auto* gen_random = app.add_subcommand("gen-random", "Generate a random instance");
  AddCommonGeneratorFlags(gen_random, random_flags);
  gen_random->add_option("--d", random_flags.d, "Arc density");

  GeneratorFlags sw_flags;
  auto* gen_sw = app.add_subcommand("gen-smallworld", "Generate a small-world instance");
  AddCommonGeneratorFlags(gen_sw, sw_flags);
  gen_sw->add_option("--k", sw_flags.k, "Initial neighbour fraction");
  gen_sw->add_option("--beta", sw_flags.beta, "Rewiring probability");

  std::string instance_path;
  std::string method = "bb";
  double time_limit = 1800.0;
  uint64_t seed = 1;
  bool no_timing = false;
  std::string out;

  auto* solve = app.add_subcommand("solve", "Solve an instance file");
  solve->add_option("--instance", instance_path, "Instance file")->required();
  solve->add_option("--method", method, "bb, heur or bf")
      ->check(CLI::IsMember({"bb", "heur", "bf"}));
  solve->add_option("--time-limit", time_limit, "Seconds")->capture_default_str();
  solve->add_option("--seed", seed, "Heuristic seed");
  solve->add_flag("--no-timing", no_timing, "Print timings as NA");
  solve->add_option("--out", out, "Report file (default stdout)");

  std::string sec_mode = "mtz";
  auto* exp = app.add_subcommand("export", "Write the linear model in LP format");
  exp->add_option("--instance", instance_path, "Instance file")->required();
  exp->add_option("--sec-mode", sec_mode, "mtz or omit")
      ->check(CLI::IsMember({"mtz", "omit"}));
  exp->add_option("--out", out, "LP file (default stdout)");

  std::string directory;
  int workers = 1;
  auto* bench = app.add_subcommand("bench", "Solve every instance of a directory");
  bench->add_option("--dir", directory, "Instance directory")->required();
  bench->add_option("--method", method, "bb, heur or bf")
      ->check(CLI::IsMember({"bb", "heur", "bf"}));
  bench->add_option("--time-limit", time_limit, "Seconds per instance")->capture_default_str();
  bench->add_option("--seed", seed, "Heuristic seed");
  bench->add_option("--workers", workers, "Instances solved in parallel");
  bench->add_flag("--no-timing", no_timing, "Print timings as NA");
  bench->add_option("--out", out, "CSV file (default stdout)");

  std::string path_text;
  std::string assignment_path;
  auto* validate = app.add_subcommand(
      "validate", "Check an instance file, a path, or a model assignment");
  validate->add_option("--instance", instance_path, "Instance file")->required();
  validate->add_option("--path", path_text, "Vertex ids, space separated");
  validate->add_option("--assignment", assignment_path, "name=value file");
  validate->add_option("--sec-mode", sec_mode, "mtz or omit")
      ->check(CLI::IsMember({"mtz", "omit"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_random) {
      auto config = LoadProfile<RandomConfig>(random_flags);
      ApplyCommon(random_flags, config);
      if (random_flags.d) config.d = *random_flags.d;
      WriteGenerated(GenerateRandom(config), config, random_flags);
    } else if (*gen_sw) {
      auto config = LoadProfile<SmallWorldConfig>(sw_flags);
      ApplyCommon(sw_flags, config);
      if (sw_flags.k) config.k = *sw_flags.k;
      if (sw_flags.beta) config.beta = *sw_flags.beta;
      WriteGenerated(GenerateSmallWorld(config), config, sw_flags);
    } else if (*solve) {
      const Instance instance = ReadInstanceFile(instance_path);
      const Seconds limit{time_limit};
      SolveReport report;
      if (method == "bb") {
        BranchAndBoundOptions options;
        options.time_limit = limit;
        report = BranchAndBound(instance, options);
      } else if (method == "heur") {
        LocalSearchOptions options;
        options.time_limit = limit;
        options.seed = seed;
        report = LocalSearch(instance, options);
      } else {
        BruteForceOptions options;
        options.time_limit = limit;
        report = BruteForce(instance, options);
      }
      Emit(RenderReport(report, method, !no_timing), out);
      if (!report.incumbent && report.status == SolveStatus::kTimeLimit) {
        return kExitNoIncumbent;
      }
    } else if (*exp) {
      const Instance instance = ReadInstanceFile(instance_path);
      Emit(RenderLp(ExportFlowModel(instance, ParseSecMode(sec_mode))), out);
    } else if (*bench) {
      BenchOptions options;
      options.directory = directory;
      options.method = ParseBenchMethod(method);
      options.time_limit = Seconds{time_limit};
      options.seed = seed;
      options.workers = workers;
      options.timing = !no_timing;
      Emit(RenderBenchCsv(RunBench(options), options), out);
    } else if (*validate) {
      const Instance instance = ReadInstanceFile(instance_path);
      std::cout << "instance: ok n=" << instance.vertex_count()
                << " m=" << instance.arc_count() << " c=" << instance.conflict_count()
                << '\n';
      int status = 0;
      if (!path_text.empty()) {
        const PathSolution solution = Evaluate(instance, ParseVertexList(path_text));
        std::cout << "path: ok objective=" << solution.objective()
                  << " arc_cost=" << solution.arc_cost
                  << " penalty_cost=" << solution.penalty_cost << '\n';
      }
      if (!assignment_path.empty()) {
        const ExportedModel model = ExportFlowModel(instance, ParseSecMode(sec_mode));
        const Assignment assignment = ParseAssignment(ReadTextFile(assignment_path));
        const ModelCheck check = VerifyModelAtPoint(model, assignment);
        std::cout << "assignment: objective=" << check.objective.num;
        if (check.objective.den != 1) std::cout << '/' << check.objective.den;
        std::cout << " violated=" << check.violated.size() << '\n';
        for (const std::string& row : check.violated) std::cout << "  " << row << '\n';
        if (check.violated.empty()) {
          const SelectionResult decoded =
              ValidateSelection(instance, DecodeArcFlags(instance, assignment));
          if (const auto* violation = std::get_if<SelectionViolation>(&decoded)) {
            std::cout << "selection: rejected, " << violation->Describe() << '\n';
            status = kExitRejected;
          } else {
            std::cout << "selection: simple path\n";
          }
        } else {
          status = kExitRejected;
        }
      }
      return status;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InvariantError& e) {
    std::cerr << "invariant error: " << e.what() << '\n';
    return kExitParse;
  } catch (const MalformedPath& e) {
    std::cerr << "malformed path: " << e.what() << '\n';
    return kExitParse;
  } catch (const GuardExceeded& e) {
    std::cerr << "guard exceeded: " << e.what() << '\n';
    return kExitNoIncumbent;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRejected;
  }
  return 0;
}
