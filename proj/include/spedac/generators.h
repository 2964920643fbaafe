// Seeded generators for the two benchmark families: uniformly random directed
// graphs and Watts-Strogatz small-world networks, both with uniformly sampled
// conflict pairs. Source and sink are always 0 and n - 1.

#ifndef SPEDAC_GENERATORS_H_
#define SPEDAC_GENERATORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "spedac/core.h"

namespace spedac {

class UnsatisfiableConfig : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntRange {
  Cost lo = 1;
  Cost hi = 1;

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct RandomConfig {
  int32_t n = 100;
  double d = 0.1;        // arc density: |A| = round(d * n * (n - 1))
  double r = 1e-3;       // conflict density: |C| = floor(r / 2 * m * (m - 1))
  IntRange penalty_range{25, 125};
  IntRange weight_range{1, 100};
  uint64_t seed = 1;
};

struct SmallWorldConfig {
  int32_t n = 100;
  double k = 0.15;       // ring degree is k * n rounded to the nearest even
  double beta = 0.5;     // per-arc rewiring probability
  double r = 1e-3;
  IntRange penalty_range{1, 20};
  IntRange weight_range{1, 100};
  uint64_t seed = 1;
};

// Regeneration attempts before giving up on source-sink reachability.
inline constexpr int kMaxReachabilityAttempts = 100;

int64_t RandomArcCount(int32_t n, double d);
int64_t ConflictCount(int64_t arc_count, double r);
int32_t RingDegree(int32_t n, double k);

// Throw std::invalid_argument on an invalid config, UnsatisfiableConfig when
// no attempt yields a sink reachable from the source.
Instance GenerateRandom(const RandomConfig& config);
Instance GenerateSmallWorld(const SmallWorldConfig& config);

// key=value profile: one pair per line, '#' starts a comment. `family` selects
// random or smallworld; other keys are n, d, k, beta, r, penalty_lo,
// penalty_hi, weight_lo, weight_hi, seed. Unset keys keep their defaults.
using GeneratorConfig = std::variant<RandomConfig, SmallWorldConfig>;
GeneratorConfig ParseProfile(std::string_view text);

}  // namespace spedac

#endif  // SPEDAC_GENERATORS_H_
