#include "spedac/bench.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <regex>
#include <thread>
#include <tuple>

#include "spedac/instance_io.h"

namespace spedac {
namespace {

std::string Fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

std::string Cell(const std::optional<double>& value, int decimals) {
  return value ? Fixed(*value, decimals) : "NA";
}

struct GroupKey {
  std::string family;
  int32_t density = 0;
  int32_t n = 0;

  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

GroupKey KeyOf(const std::string& file_name) {
  if (auto name = ParseInstanceName(file_name)) {
    return {name->family, name->density_hundredths, name->n};
  }
  return {"unlabeled", 0, 0};
}

std::string DensityLabel(const GroupKey& key) {
  if (key.family == "unlabeled") return key.family;
  const char* symbol = key.family == "smallworld" ? "k=" : "d=";
  return key.family + " " + symbol + Fixed(key.density / 100.0, 2);
}

std::string GroupLabel(const GroupKey& key) {
  if (key.family == "unlabeled") return key.family;
  return DensityLabel(key) + " n=" + std::to_string(key.n);
}

}  // namespace

std::string FormatInstanceName(const InstanceName& name) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), "%s_n%03d_d%03d_r%03lld_p%lld-%lld_s%llu.spedac",
                name.family.c_str(), name.n, name.density_hundredths,
                static_cast<long long>(name.r_units),
                static_cast<long long>(name.penalty_lo),
                static_cast<long long>(name.penalty_hi),
                static_cast<unsigned long long>(name.seed));
  return buffer;
}

std::optional<InstanceName> ParseInstanceName(std::string_view file_name) {
  static const std::regex pattern(
      R"(^(random|smallworld)_n(\d+)_d(\d+)_r(\d+)_p(\d+)-(\d+)_s(\d+)\.spedac$)");
  std::match_results<std::string_view::const_iterator> match;
  if (!std::regex_match(file_name.begin(), file_name.end(), match, pattern)) {
    return std::nullopt;
  }
  try {
    InstanceName name;
    name.family = match[1].str();
    name.n = std::stoi(match[2].str());
    name.density_hundredths = std::stoi(match[3].str());
    name.r_units = std::stoll(match[4].str());
    name.penalty_lo = std::stoll(match[5].str());
    name.penalty_hi = std::stoll(match[6].str());
    name.seed = std::stoull(match[7].str());
    return name;
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

InstanceName NameFor(const RandomConfig& config) {
  return {"random",
          config.n,
          static_cast<int32_t>(std::lround(config.d * 100)),
          std::llround(config.r * 1e5),
          config.penalty_range.lo,
          config.penalty_range.hi,
          config.seed};
}

InstanceName NameFor(const SmallWorldConfig& config) {
  return {"smallworld",
          config.n,
          static_cast<int32_t>(std::lround(config.k * 100)),
          std::llround(config.r * 1e5),
          config.penalty_range.lo,
          config.penalty_range.hi,
          config.seed};
}

std::string ToString(BenchMethod method) {
  switch (method) {
    case BenchMethod::kBranchAndBound:
      return "bb";
    case BenchMethod::kLocalSearch:
      return "heur";
    case BenchMethod::kBruteForce:
      return "bf";
  }
  return "unknown";
}

BenchMethod ParseBenchMethod(std::string_view text) {
  if (text == "bb") return BenchMethod::kBranchAndBound;
  if (text == "heur") return BenchMethod::kLocalSearch;
  if (text == "bf") return BenchMethod::kBruteForce;
  throw std::invalid_argument("unknown method: " + std::string(text));
}

BenchRow SolveForBench(const std::filesystem::path& file,
                       const BenchOptions& options) {
  BenchRow row;
  row.instance = file.filename().string();
  row.set_label = GroupLabel(KeyOf(row.instance));
  row.method = ToString(options.method);
  SolveReport report;
  try {
    const Instance instance = ReadInstanceFile(file);
    switch (options.method) {
      case BenchMethod::kBranchAndBound: {
        BranchAndBoundOptions bb;
        bb.time_limit = options.time_limit;
        report = BranchAndBound(instance, bb);
        break;
      }
      case BenchMethod::kLocalSearch: {
        LocalSearchOptions ls;
        ls.time_limit = options.time_limit;
        ls.seed = options.seed;
        report = LocalSearch(instance, ls);
        break;
      }
      case BenchMethod::kBruteForce: {
        BruteForceOptions bf;
        bf.time_limit = options.time_limit;
        report = BruteForce(instance, bf);
        break;
      }
    }
  } catch (const ParseError&) {
    row.status = "ParseError";
    return row;
  } catch (const InvariantError&) {
    row.status = "InvariantError";
    return row;
  } catch (const GuardExceeded&) {
    row.status = "GuardExceeded";
    return row;
  } catch (const std::exception&) {
    row.status = "Error";
    return row;
  }
  row.status = ToString(report.status);
  if (report.upper_bound < kInfiniteCost) {
    row.upper_bound = static_cast<double>(report.upper_bound);
    row.lower_bound = static_cast<double>(report.lower_bound);
    row.gap_percent = OptimalityGap(report);
  } else if (report.lower_bound < kInfiniteCost) {
    row.lower_bound = static_cast<double>(report.lower_bound);
  }
  if (options.timing) {
    row.seconds_best = report.seconds_to_best.count();
    row.seconds_total = report.seconds_total.count();
  }
  return row;
}

BenchRow MeanRow(const std::string& set_label, const std::string& method,
                 const std::vector<BenchRow>& members) {
  BenchRow mean;
  mean.set_label = set_label;
  mean.method = method;
  mean.aggregate = true;
  double lb = 0, ub = 0, best = 0, total = 0, gap = 0;
  bool timed = true;
  for (const BenchRow& row : members) {
    if (!row.upper_bound || !row.lower_bound || !row.gap_percent) continue;
    ++mean.members;
    lb += *row.lower_bound;
    ub += *row.upper_bound;
    gap += *row.gap_percent;
    if (row.seconds_best && row.seconds_total) {
      best += *row.seconds_best;
      total += *row.seconds_total;
    } else {
      timed = false;
    }
  }
  mean.status = "mean(" + std::to_string(mean.members) + ")";
  if (mean.members == 0) return mean;
  const double count = mean.members;
  mean.lower_bound = lb / count;
  mean.upper_bound = ub / count;
  mean.gap_percent = gap / count;
  if (timed) {
    mean.seconds_best = best / count;
    mean.seconds_total = total / count;
  }
  return mean;
}

std::vector<BenchRow> RunBench(const BenchOptions& options) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(options.directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".spedac") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const auto& x, const auto& y) {
    const std::string fx = x.filename().string(), fy = y.filename().string();
    return std::forward_as_tuple(KeyOf(fx), fx) < std::forward_as_tuple(KeyOf(fy), fy);
  });

  std::vector<BenchRow> solved(files.size());
  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    for (size_t i = 0; i < files.size(); ++i) solved[i] = SolveForBench(files[i], options);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next++; i < files.size(); i = next++) {
          solved[i] = SolveForBench(files[i], options);
        }
      });
    }
  }

  // Files are sorted by (family, density, n), so groups are contiguous.
  std::vector<BenchRow> rows;
  const std::string method = ToString(options.method);
  size_t i = 0;
  while (i < files.size()) {
    const GroupKey density_key = KeyOf(files[i].filename().string());
    std::vector<BenchRow> density_members;
    while (i < files.size()) {
      GroupKey key = KeyOf(files[i].filename().string());
      if (key.family != density_key.family || key.density != density_key.density) break;
      std::vector<BenchRow> group;
      while (i < files.size() && KeyOf(files[i].filename().string()) == key) {
        rows.push_back(solved[i]);
        group.push_back(solved[i]);
        ++i;
      }
      rows.push_back(MeanRow(GroupLabel(key), method, group));
      density_members.insert(density_members.end(), group.begin(), group.end());
    }
    if (density_key.family != "unlabeled") {
      rows.push_back(MeanRow(DensityLabel(density_key), method, density_members));
    }
  }
  return rows;
}

std::string RenderBenchCsv(const std::vector<BenchRow>& rows,
                           const BenchOptions& options) {
  std::string out = "# spedac-bench v1 method=" + ToString(options.method) +
                    " time_limit=" + Fixed(options.time_limit.count(), 3) +
                    " seed=" + std::to_string(options.seed) + "\n";
  out += "Set,LB,UB,Sec best,Sec tot,Opt gap %,Status,Instance,Method\n";
  for (const BenchRow& row : rows) {
    out += row.set_label + ',' + Cell(row.lower_bound, 1) + ',' +
           Cell(row.upper_bound, 1) + ',' + Cell(row.seconds_best, 3) + ',' +
           Cell(row.seconds_total, 3) + ',' + Cell(row.gap_percent, 5) + ',' +
           row.status + ',' + row.instance + ',' + row.method + '\n';
  }
  return out;
}

}  // namespace spedac
