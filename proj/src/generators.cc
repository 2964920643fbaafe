#include "spedac/generators.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace spedac {
namespace {

// Independent substreams: a change to one parameter family (say the penalty
// range) never perturbs the draws of another (the topology).
enum class Stream : uint32_t {
  kArcs = 1,
  kRewire = 2,
  kWeights = 3,
  kConflicts = 4,
  kPenalties = 5
};

std::mt19937_64 MakeStream(uint64_t seed, Stream stream, uint32_t attempt) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream), attempt};
  return std::mt19937_64(seq);
}

// Unbiased integer in [lo, hi]; written out so that the draw sequence does not
// depend on the standard library's distribution implementation.
uint64_t UniformBelow(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

int64_t UniformInt(std::mt19937_64& rng, int64_t lo, int64_t hi) {
  return lo + static_cast<int64_t>(UniformBelow(rng, static_cast<uint64_t>(hi - lo) + 1));
}

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Floyd's algorithm: `count` distinct values from [0, universe), sorted.
std::vector<uint64_t> SampleWithoutReplacement(std::mt19937_64& rng,
                                               uint64_t universe,
                                               uint64_t count) {
  std::unordered_set<uint64_t> chosen;
  chosen.reserve(count * 2);
  for (uint64_t j = universe - count; j < universe; ++j) {
    const uint64_t t = UniformBelow(rng, j + 1);
    chosen.insert(chosen.contains(t) ? j : t);
  }
  std::vector<uint64_t> result(chosen.begin(), chosen.end());
  std::sort(result.begin(), result.end());
  return result;
}

// Index of the first unordered pair (a, b > a) in row-major order.
uint64_t PairRowStart(uint64_t a, uint64_t m) { return a * (2 * m - a - 1) / 2; }

std::pair<ArcIndex, ArcIndex> DecodeUnorderedPair(uint64_t index, uint64_t m) {
  const long double b = 2.0L * m - 1.0L;
  uint64_t a = static_cast<uint64_t>(
      std::max(0.0L, std::floor((b - std::sqrt(b * b - 8.0L * index)) / 2.0L)));
  while (a > 0 && PairRowStart(a, m) > index) --a;
  while (a + 1 < m && PairRowStart(a + 1, m) <= index) ++a;
  const uint64_t second = a + 1 + (index - PairRowStart(a, m));
  return {static_cast<ArcIndex>(a), static_cast<ArcIndex>(second)};
}

bool SinkReachable(int32_t n, const std::vector<ArcRecord>& arcs,
                   VertexId source, VertexId sink) {
  std::vector<std::vector<VertexId>> adjacency(n);
  for (const ArcRecord& arc : arcs) adjacency[arc.tail].push_back(arc.head);
  std::vector<uint8_t> seen(n, 0);
  std::queue<VertexId> queue;
  queue.push(source);
  seen[source] = 1;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop();
    if (v == sink) return true;
    for (VertexId w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push(w);
      }
    }
  }
  return false;
}

void CheckRanges(const IntRange& penalty, const IntRange& weight, double r) {
  if (penalty.lo < 1 || penalty.hi < penalty.lo) {
    throw std::invalid_argument("penalty range must satisfy 1 <= lo <= hi");
  }
  if (weight.lo < 0 || weight.hi < weight.lo) {
    throw std::invalid_argument("weight range must satisfy 0 <= lo <= hi");
  }
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::invalid_argument("conflict density r must lie in [0, 1]");
  }
}

// Draws weights, conflicts and penalties for a fixed topology.
Instance Decorate(int32_t n, std::vector<ArcRecord> arcs, double r,
                  const IntRange& penalty_range, const IntRange& weight_range,
                  uint64_t seed) {
  auto weight_rng = MakeStream(seed, Stream::kWeights, 0);
  for (ArcRecord& arc : arcs) {
    arc.weight = UniformInt(weight_rng, weight_range.lo, weight_range.hi);
  }
  const uint64_t m = arcs.size();
  const int64_t conflict_count = ConflictCount(static_cast<int64_t>(m), r);
  auto conflict_rng = MakeStream(seed, Stream::kConflicts, 0);
  auto penalty_rng = MakeStream(seed, Stream::kPenalties, 0);
  std::vector<ConflictRecord> conflicts;
  conflicts.reserve(conflict_count);
  for (uint64_t index :
       SampleWithoutReplacement(conflict_rng, m * (m - 1) / 2, conflict_count)) {
    const auto [a, b] = DecodeUnorderedPair(index, m);
    conflicts.push_back({a, b, 0});
  }
  for (ConflictRecord& c : conflicts) {
    c.penalty = UniformInt(penalty_rng, penalty_range.lo, penalty_range.hi);
  }
  return Instance(n, std::move(arcs), std::move(conflicts), 0, n - 1);
}

}  // namespace

int64_t RandomArcCount(int32_t n, double d) {
  return std::llround(d * static_cast<double>(n) * (n - 1));
}

int64_t ConflictCount(int64_t arc_count, double r) {
  const long double pairs =
      static_cast<long double>(arc_count) * (arc_count - 1) / 2.0L;
  // The epsilon absorbs representation error in r (e.g. 3e-5) so that exact
  // integer products are not floored one below.
  return static_cast<int64_t>(std::floor(static_cast<long double>(r) * pairs + 1e-9L));
}

int32_t RingDegree(int32_t n, double k) {
  const double neighbours = std::round(k * n * 1e9) / 1e9;
  return 2 * static_cast<int32_t>(std::floor(neighbours / 2.0 + 0.5));
}

Instance GenerateRandom(const RandomConfig& config) {
  const int32_t n = config.n;
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (!(config.d > 0.0 && config.d <= 1.0)) {
    throw std::invalid_argument("arc density d must lie in (0, 1]");
  }
  CheckRanges(config.penalty_range, config.weight_range, config.r);
  const int64_t m = RandomArcCount(n, config.d);
  if (m < 1) throw std::invalid_argument("d * n * (n - 1) must be at least 1");

  const uint64_t ordered_pairs = static_cast<uint64_t>(n) * (n - 1);
  for (uint32_t attempt = 0; attempt < kMaxReachabilityAttempts; ++attempt) {
    auto rng = MakeStream(config.seed, Stream::kArcs, attempt);
    std::vector<ArcRecord> arcs;
    arcs.reserve(m);
    for (uint64_t index : SampleWithoutReplacement(rng, ordered_pairs, m)) {
      const auto tail = static_cast<VertexId>(index / (n - 1));
      auto head = static_cast<VertexId>(index % (n - 1));
      if (head >= tail) ++head;
      arcs.push_back({tail, head, 0});
    }
    if (SinkReachable(n, arcs, 0, n - 1)) {
      return Decorate(n, std::move(arcs), config.r, config.penalty_range,
                      config.weight_range, config.seed);
    }
  }
  throw UnsatisfiableConfig("sink unreachable after " +
                            std::to_string(kMaxReachabilityAttempts) +
                            " arc samples");
}

Instance GenerateSmallWorld(const SmallWorldConfig& config) {
  const int32_t n = config.n;
  if (n < 3) throw std::invalid_argument("n must be at least 3");
  if (!(config.beta >= 0.0 && config.beta <= 1.0)) {
    throw std::invalid_argument("rewiring probability must lie in [0, 1]");
  }
  CheckRanges(config.penalty_range, config.weight_range, config.r);
  const int32_t degree = RingDegree(n, config.k);
  if (degree < 2 || degree > n - 1) {
    throw std::invalid_argument("k * n must round to an even degree in [2, n - 1]");
  }

  std::vector<ArcRecord> ring;
  ring.reserve(static_cast<size_t>(n) * degree);
  for (VertexId i = 0; i < n; ++i) {
    for (int32_t offset = 1; offset <= degree / 2; ++offset) {
      const VertexId j = (i + offset) % n;
      ring.push_back({i, j, 0});
      ring.push_back({j, i, 0});
    }
  }
  auto key = [n](VertexId tail, VertexId head) {
    return static_cast<int64_t>(tail) * n + head;
  };

  for (uint32_t attempt = 0; attempt < kMaxReachabilityAttempts; ++attempt) {
    auto rng = MakeStream(config.seed, Stream::kRewire, attempt);
    std::vector<ArcRecord> arcs = ring;
    std::unordered_set<int64_t> present;
    present.reserve(arcs.size() * 2);
    for (const ArcRecord& arc : arcs) present.insert(key(arc.tail, arc.head));
    for (ArcRecord& arc : arcs) {
      if (Uniform01(rng) >= config.beta) continue;
      for (int32_t tries = 0; tries < n; ++tries) {
        const auto head = static_cast<VertexId>(UniformBelow(rng, n));
        if (head == arc.tail || present.contains(key(arc.tail, head))) continue;
        present.erase(key(arc.tail, arc.head));
        present.insert(key(arc.tail, head));
        arc.head = head;
        break;
      }
    }
    std::sort(arcs.begin(), arcs.end(), [](const ArcRecord& x, const ArcRecord& y) {
      return std::tie(x.tail, x.head) < std::tie(y.tail, y.head);
    });
    if (SinkReachable(n, arcs, 0, n - 1)) {
      return Decorate(n, std::move(arcs), config.r, config.penalty_range,
                      config.weight_range, config.seed);
    }
  }
  throw UnsatisfiableConfig("sink unreachable after " +
                            std::to_string(kMaxReachabilityAttempts) +
                            " rewirings");
}

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  const std::string text(value);
  size_t consumed = 0;
  T result{};
  try {
    if constexpr (std::is_floating_point_v<T>) {
      result = static_cast<T>(std::stod(text, &consumed));
    } else if constexpr (std::is_unsigned_v<T>) {
      result = static_cast<T>(std::stoull(text, &consumed));
    } else {
      result = static_cast<T>(std::stoll(text, &consumed));
    }
  } catch (const std::logic_error&) {
    consumed = 0;
  }
  if (consumed != text.size() || text.empty()) {
    throw std::invalid_argument("profile: bad value for '" + std::string(key) +
                                "': " + text);
  }
  return result;
}

}  // namespace

GeneratorConfig ParseProfile(std::string_view text) {
  RandomConfig random;
  SmallWorldConfig small_world;
  bool is_small_world = false;
  std::istringstream lines{std::string(text)};
  std::string raw;
  int line_number = 0;
  while (std::getline(lines, raw)) {
    ++line_number;
    std::string_view line = raw;
    line = Trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("profile line " + std::to_string(line_number) +
                                  ": expected key=value");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (key == "family") {
      if (value == "random") {
        is_small_world = false;
      } else if (value == "smallworld") {
        is_small_world = true;
      } else {
        throw std::invalid_argument("profile: unknown family " + std::string(value));
      }
    } else if (key == "n") {
      random.n = small_world.n = ParseNumber<int32_t>(key, value);
    } else if (key == "d") {
      random.d = ParseNumber<double>(key, value);
    } else if (key == "k") {
      small_world.k = ParseNumber<double>(key, value);
    } else if (key == "beta") {
      small_world.beta = ParseNumber<double>(key, value);
    } else if (key == "r") {
      random.r = small_world.r = ParseNumber<double>(key, value);
    } else if (key == "penalty_lo") {
      random.penalty_range.lo = small_world.penalty_range.lo =
          ParseNumber<Cost>(key, value);
    } else if (key == "penalty_hi") {
      random.penalty_range.hi = small_world.penalty_range.hi =
          ParseNumber<Cost>(key, value);
    } else if (key == "weight_lo") {
      random.weight_range.lo = small_world.weight_range.lo =
          ParseNumber<Cost>(key, value);
    } else if (key == "weight_hi") {
      random.weight_range.hi = small_world.weight_range.hi =
          ParseNumber<Cost>(key, value);
    } else if (key == "seed") {
      random.seed = small_world.seed = ParseNumber<uint64_t>(key, value);
    } else {
      throw std::invalid_argument("profile: unknown key " + std::string(key));
    }
  }
  if (is_small_world) return small_world;
  return random;
}

}  // namespace spedac
