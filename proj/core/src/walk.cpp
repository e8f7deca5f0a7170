#include "loclim/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace loclim {
namespace {

constexpr std::uint64_t kStepsPerWord = 32;

// Position packed as (y + 2^31) << 32 | (x + 2^31).  Coordinate moves never
// carry across the halves while |x|, |y| stay below 2^31 - 1, so one 64-bit
// add per step and one compare against the packed origin suffice.
constexpr std::uint64_t kHalf = 1ULL << 31;
constexpr std::uint64_t kPackedOrigin = (kHalf << 32) | kHalf;
constexpr std::uint64_t kPackedDelta[4] = {
    1ULL,                  // +x
    ~0ULL,                 // -x
    1ULL << 32,            // +y
    ~0ULL << 32,           // -y
};

std::uint64_t pack(LatticePoint p) {
  return ((static_cast<std::uint64_t>(p.y) + kHalf) << 32) |
         (static_cast<std::uint64_t>(p.x) + kHalf);
}

LatticePoint unpack(std::uint64_t pos) {
  return LatticePoint{
      static_cast<std::int64_t>(pos & 0xffffffffULL) - static_cast<std::int64_t>(kHalf),
      static_cast<std::int64_t>(pos >> 32) - static_cast<std::int64_t>(kHalf),
  };
}

void check_horizon(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("walk horizon must be >= 1");
  if (n > kMaxWalkHorizon)
    throw std::invalid_argument("walk horizon exceeds " + std::to_string(kMaxWalkHorizon));
}

}  // namespace

std::uint64_t ReturnRecord::local_time(std::uint64_t k) const {
  if (k > horizon) throw std::invalid_argument("local_time: k exceeds the record horizon");
  auto it = std::upper_bound(returns.begin(), returns.end(), k);
  return static_cast<std::uint64_t>(it - returns.begin());
}

ReturnRecord ReturnRecord::truncated(std::uint64_t new_horizon) const {
  if (new_horizon == 0 || new_horizon > horizon)
    throw std::invalid_argument("truncated: new horizon must be in [1, horizon]");
  ReturnRecord out;
  out.horizon = new_horizon;
  auto it = std::upper_bound(returns.begin(), returns.end(), new_horizon);
  out.returns.assign(returns.begin(), it);
  return out;
}

ReturnRecord simulate_walk_returns(std::uint64_t n, RngStream stream) {
  check_horizon(n);
  ReturnRecord rec;
  rec.horizon = n;
  std::uint64_t pos = kPackedOrigin;
  std::uint64_t k = 0;
  while (k < n) {
    std::uint64_t bits = stream.next_u64();
    const std::uint64_t batch = std::min<std::uint64_t>(kStepsPerWord, n - k);
    for (std::uint64_t i = 0; i < batch; ++i) {
      pos += kPackedDelta[bits & 3];
      bits >>= 2;
      ++k;
      if (!(k & 1) && pos == kPackedOrigin) rec.returns.push_back(k);
    }
  }
  return rec;
}

WalkSnapshot simulate_walk_with_endpoint(std::uint64_t n, RngStream stream) {
  check_horizon(n);
  WalkSnapshot snap;
  snap.record.horizon = n;
  std::uint64_t pos = kPackedOrigin;
  std::uint64_t k = 0;
  while (k < n) {
    std::uint64_t bits = stream.next_u64();
    const std::uint64_t batch = std::min<std::uint64_t>(kStepsPerWord, n - k);
    for (std::uint64_t i = 0; i < batch; ++i) {
      pos += kPackedDelta[bits & 3];
      bits >>= 2;
      ++k;
      if (!(k & 1) && pos == kPackedOrigin) snap.record.returns.push_back(k);
    }
  }
  snap.end = unpack(pos);
  return snap;
}

HittingOutcome simulate_hitting_time(LatticePoint v, std::uint64_t cap, RngStream stream) {
  if (v == LatticePoint{}) throw std::invalid_argument("hitting walk must start away from the origin");
  const std::uint64_t reach =
      static_cast<std::uint64_t>(std::max(std::llabs(v.x), std::llabs(v.y)));
  if (cap == 0 || cap > kMaxWalkHorizon || reach + cap > kMaxWalkHorizon)
    throw std::invalid_argument("hitting cap out of range for the packed position encoding");

  HittingOutcome out;
  out.start = v;
  out.cap = cap;
  std::uint64_t pos = pack(v);
  std::uint64_t k = 0;
  while (k < cap) {
    std::uint64_t bits = stream.next_u64();
    const std::uint64_t batch = std::min<std::uint64_t>(kStepsPerWord, cap - k);
    for (std::uint64_t i = 0; i < batch; ++i) {
      pos += kPackedDelta[bits & 3];
      bits >>= 2;
      ++k;
      if (pos == kPackedOrigin) {
        out.hit_time = k;
        return out;
      }
    }
  }
  return out;
}

ExcursionStats excursion_stats(const ReturnRecord& record) {
  ExcursionStats st;
  st.lengths.reserve(record.returns.size());
  std::uint64_t prev = 0;
  for (std::uint64_t r : record.returns) {
    st.lengths.push_back(r - prev);
    prev = r;
  }
  st.last_return = prev;
  st.ongoing = record.horizon - prev;
  st.max_interior = st.lengths.empty() ? 0 : *std::max_element(st.lengths.begin(), st.lengths.end());
  return st;
}

std::optional<std::uint64_t> first_return_after(const ReturnRecord& record, std::uint64_t m) {
  auto it = std::upper_bound(record.returns.begin(), record.returns.end(), m);
  if (it == record.returns.end()) return std::nullopt;
  return *it;
}

namespace {

constexpr std::uint64_t kExactBinomialCutoff = 30;

// C(2m, m) for m <= 30; every intermediate product fits a 64-bit mantissa, so
// the long double arithmetic is exact.
long double central_binomial(std::uint64_t m) {
  long double c = 1.0L;
  for (std::uint64_t i = 1; i <= m; ++i) c = c * static_cast<long double>(m + i) / i;
  return c;
}

}  // namespace

double exact_return_probability(std::uint64_t m) {
  if (m == 0) return 1.0;
  if (m <= kExactBinomialCutoff) {
    const long double half = ldexpl(central_binomial(m), -2 * static_cast<int>(m));
    return static_cast<double>(half * half);
  }
  const long double half = ldexpl(central_binomial(kExactBinomialCutoff),
                                  -2 * static_cast<int>(kExactBinomialCutoff));
  long double p = half * half;
  for (std::uint64_t i = kExactBinomialCutoff + 1; i <= m; ++i) {
    const long double r = (2.0L * i - 1.0L) / (2.0L * i);
    p *= r * r;
  }
  return static_cast<double>(p);
}

double exact_mean_local_time(std::uint64_t n) {
  const std::uint64_t terms = n / 2;
  long double sum = 0.0L;
  long double p = 1.0L;
  for (std::uint64_t m = 1; m <= terms; ++m) {
    if (m <= kExactBinomialCutoff) {
      p = exact_return_probability(m);
    } else {
      const long double r = (2.0L * m - 1.0L) / (2.0L * m);
      p *= r * r;
    }
    sum += p;
  }
  return static_cast<double>(sum);
}

double LocalTimePmf::probability(std::size_t k) const {
  if (k >= counts.size()) return 0.0;
  return static_cast<double>(counts[k]) / static_cast<double>(total);
}

double LocalTimePmf::mean() const {
  return static_cast<double>(weighted_visits()) / static_cast<double>(total);
}

std::uint64_t LocalTimePmf::weighted_visits() const {
  std::uint64_t s = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) s += k * counts[k];
  return s;
}

namespace {

void enumerate_rec(std::uint64_t remaining, std::uint64_t pos, std::uint32_t visits,
                   std::vector<std::uint64_t>& counts) {
  if (remaining == 0) {
    ++counts[visits];
    return;
  }
  for (int d = 0; d < 4; ++d) {
    const std::uint64_t next = pos + kPackedDelta[d];
    enumerate_rec(remaining - 1, next, visits + (next == kPackedOrigin ? 1 : 0), counts);
  }
}

}  // namespace

LocalTimePmf enumerate_local_time_distribution(std::uint64_t n) {
  if (n == 0 || n > kMaxEnumerationHorizon)
    throw std::invalid_argument("enumeration horizon must be in [1, " +
                                std::to_string(kMaxEnumerationHorizon) + "]");
  LocalTimePmf pmf;
  pmf.n = n;
  pmf.total = 1ULL << (2 * n);
  pmf.counts.assign(n / 2 + 1, 0);
  enumerate_rec(n, kPackedOrigin, 0, pmf.counts);
  return pmf;
}

}  // namespace loclim
