#pragma once

#include <cstddef>

#include "extauction/valuations.hpp"
#include "extauction/winner_set.hpp"

namespace extauction {

/// Brute-force benchmarks scan all 2^n subsets.
inline constexpr std::size_t kMaxBruteForceAgents = 20;

/// Best uniform-price revenue: value = price * |set| with every member valuing `set` at least `price`.
struct BenchmarkResult
{
  double value = 0.0;
  double price = 0.0;
  WinnerSet set;
  std::size_t k = 1;
};

/// F^(k) by scanning every subset S with |S| >= k and pricing it at min_{i in S} b_i(S).
///
/// Ties (within kTolerance) go to the larger set, then to the smaller mask. Returns a zero
/// result with an empty set when n < k. Throws std::invalid_argument for n > 20 or k == 0.
BenchmarkResult benchmark_bruteforce(const BidOracle &bids, std::size_t k);

/// The unique maximal T ⊆ pool with b_i(free ∪ T) >= c for every i in T.
///
/// Computed by repeatedly deleting every agent that is currently below the price.
WinnerSet maximal_feasible_set(const BidOracle &bids, double price, WinnerSet pool, WinnerSet free);

/// Largest fixed-price revenue extractable from `pool` when `free` already holds the good,
/// restricted to winner sets of size at least `min_size`.
///
/// Argmin sweep: starting from T = pool, record |T| * min_{i in T} b_i(free ∪ T) and delete
/// the argmin agent (smallest id on ties) until T is empty. With monotone bids the best
/// recorded value is exact, using at most |pool|(|pool|+1)/2 queries.
BenchmarkResult revenue_given_free(const BidOracle &bids, WinnerSet pool, WinnerSet free,
                                   std::size_t min_size = 1);

/// F^(k) by the argmin sweep from [n]. Same value as benchmark_bruteforce on monotone bids.
BenchmarkResult benchmark_sweep(const BidOracle &bids, std::size_t k);

}  // namespace extauction
