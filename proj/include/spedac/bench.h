// Benchmark harness: solves every instance file of a directory and reports one
// row per instance plus group means, using the column schema
//   Set, LB, UB, Sec best, Sec tot, Opt gap %, Status, Instance, Method.
//
// Instance files are named family_nNNN_dDDD_rRRR_pLO-HI_sSEED.spedac where
// DDD is the density (d or k) in hundredths and RRR the conflict density r in
// units of 1e-5. Rows are grouped by family, density and n.

#ifndef SPEDAC_BENCH_H_
#define SPEDAC_BENCH_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spedac/generators.h"
#include "spedac/solvers.h"

namespace spedac {

struct InstanceName {
  std::string family;  // "random" or "smallworld"
  int32_t n = 0;
  int32_t density_hundredths = 0;
  int64_t r_units = 0;  // r * 1e5
  Cost penalty_lo = 0;
  Cost penalty_hi = 0;
  uint64_t seed = 0;

  friend bool operator==(const InstanceName&, const InstanceName&) = default;
};

std::string FormatInstanceName(const InstanceName& name);
std::optional<InstanceName> ParseInstanceName(std::string_view file_name);
InstanceName NameFor(const RandomConfig& config);
InstanceName NameFor(const SmallWorldConfig& config);

enum class BenchMethod { kBranchAndBound, kLocalSearch, kBruteForce };

std::string ToString(BenchMethod method);
BenchMethod ParseBenchMethod(std::string_view text);  // bb, heur, bf

struct BenchOptions {
  std::filesystem::path directory;
  BenchMethod method = BenchMethod::kBranchAndBound;
  Seconds time_limit{1800};
  uint64_t seed = 1;
  int workers = 1;
  // When false, the timing columns print as NA so that output is byte-stable.
  bool timing = true;
};

struct BenchRow {
  std::string set_label;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
  std::optional<double> seconds_best;
  std::optional<double> seconds_total;
  std::optional<double> gap_percent;
  std::string status;
  std::string instance;  // file name; empty on aggregate rows
  std::string method;
  bool aggregate = false;
  int members = 0;  // aggregate rows: contributing instance rows
};

// Solves one instance file into a row. Failures become a row with the error
// name as status.
BenchRow SolveForBench(const std::filesystem::path& file,
                       const BenchOptions& options);

// Mean of each numeric column over the rows that have an upper bound.
BenchRow MeanRow(const std::string& set_label, const std::string& method,
                 const std::vector<BenchRow>& members);

// Per-instance rows followed by group means, in deterministic order.
std::vector<BenchRow> RunBench(const BenchOptions& options);

std::string RenderBenchCsv(const std::vector<BenchRow>& rows,
                           const BenchOptions& options);

}  // namespace spedac

#endif  // SPEDAC_BENCH_H_
