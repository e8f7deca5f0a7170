#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "loclim/rng.hpp"

namespace loclim {

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  bool operator==(const LatticePoint&) const = default;
};

// Origin visits of a single walk up to a fixed horizon.  Only visit times are
// kept; the trajectory is folded away on the fly.  All visit times are even.
struct ReturnRecord {
  std::uint64_t horizon = 0;
  std::vector<std::uint64_t> returns;  // strictly increasing

  // Number of origin visits in [1, k] (k <= horizon).
  std::uint64_t local_time(std::uint64_t k) const;
  std::uint64_t local_time() const { return returns.size(); }
  ReturnRecord truncated(std::uint64_t new_horizon) const;
};

struct WalkSnapshot {
  ReturnRecord record;
  LatticePoint end;
};

struct ExcursionStats {
  std::vector<std::uint64_t> lengths;  // closed excursion lengths, in time order
  std::uint64_t last_return = 0;       // 0 when the walk never came back
  std::uint64_t ongoing = 0;           // horizon - last_return
  std::uint64_t max_interior = 0;      // longest closed excursion
};

struct HittingOutcome {
  LatticePoint start;
  std::uint64_t cap = 0;
  std::optional<std::uint64_t> hit_time;  // empty = still away at the cap

  bool hit() const { return hit_time.has_value(); }
};

// Simple random walk on Z^2, one uniform step direction per 2 bits, 32 steps
// per 64-bit draw.  Streams are prefix-consistent: the first k steps produced
// from a given stream do not depend on the horizon.
ReturnRecord simulate_walk_returns(std::uint64_t n, RngStream stream);
WalkSnapshot simulate_walk_with_endpoint(std::uint64_t n, RngStream stream);

// First time the walk started at v reaches the origin, censored at cap steps.
HittingOutcome simulate_hitting_time(LatticePoint v, std::uint64_t cap, RngStream stream);

ExcursionStats excursion_stats(const ReturnRecord& record);

// First origin visit strictly after step m, if any.
std::optional<std::uint64_t> first_return_after(const ReturnRecord& record, std::uint64_t m);

// P(walk is at the origin at step 2m) = (C(2m,m) 2^-2m)^2.  Exact binomial
// arithmetic for small m, then a stable product recurrence; the closed form is
// cross-checked against enumerate_local_time_distribution in the test suite.
double exact_return_probability(std::uint64_t m);

// E[number of origin visits in [1, n]] = sum of exact_return_probability over
// 2m <= n, accumulated in one pass.
double exact_mean_local_time(std::uint64_t n);

// Exact distribution of the origin-visit count over all 4^n equally likely
// paths.  Brute force, so n is capped at 12 (4^12 ~ 1.7e7 leaves).
struct LocalTimePmf {
  std::uint64_t n = 0;
  std::uint64_t total = 0;             // 4^n
  std::vector<std::uint64_t> counts;   // counts[k] = paths with exactly k visits

  double probability(std::size_t k) const;
  double mean() const;
  // sum_k k * counts[k]; exact integer, used to cross-check the closed form.
  std::uint64_t weighted_visits() const;
};
LocalTimePmf enumerate_local_time_distribution(std::uint64_t n);

inline constexpr std::uint64_t kMaxEnumerationHorizon = 12;
// Positions are tracked as 32-bit offsets packed in one word; horizons beyond
// this would overflow the packing.
inline constexpr std::uint64_t kMaxWalkHorizon = (1ULL << 31) - 2;

}  // namespace loclim
