#include "extauction/benchmark.hpp"

#include <limits>
#include <stdexcept>

namespace extauction {

BenchmarkResult benchmark_bruteforce(const BidOracle &bids, std::size_t k)
{
  const std::size_t n = bids.agent_count();
  if (k == 0)
  {
    throw std::invalid_argument("benchmark needs k >= 1");
  }
  if (n > kMaxBruteForceAgents)
  {
    throw std::invalid_argument("brute-force benchmark supports n <= 20");
  }
  BenchmarkResult best;
  best.k = k;
  bool found = false;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < count; ++mask)
  {
    const WinnerSet s(mask);
    if (s.size() < k)
    {
      continue;
    }
    double price = std::numeric_limits<double>::infinity();
    for (AgentId i : s)
    {
      price = std::min(price, bids.bid(i, s));
    }
    const double value = price * static_cast<double>(s.size());
    // masks are visited in increasing order, so a tie only wins on strictly larger size
    const bool better = !found || value > best.value + kTolerance ||
                        (value >= best.value - kTolerance && s.size() > best.set.size());
    if (better)
    {
      best.value = value;
      best.price = price;
      best.set = s;
      found = true;
    }
  }
  return best;
}

WinnerSet maximal_feasible_set(const BidOracle &bids, double price, WinnerSet pool, WinnerSet free)
{
  WinnerSet current = pool;
  while (true)
  {
    WinnerSet dropped;
    const WinnerSet everyone = free | current;
    for (AgentId i : current)
    {
      if (bids.bid(i, everyone) < price)
      {
        dropped.insert(i);
      }
    }
    if (dropped.empty())
    {
      return current;
    }
    current = current - dropped;
  }
}

BenchmarkResult revenue_given_free(const BidOracle &bids, WinnerSet pool, WinnerSet free, std::size_t min_size)
{
  BenchmarkResult best;
  best.k = min_size;
  WinnerSet current = pool;
  while (!current.empty() && current.size() >= min_size)
  {
    const WinnerSet everyone = free | current;
    double low = std::numeric_limits<double>::infinity();
    AgentId argmin = 0;
    for (AgentId i : current)
    {
      const double b = bids.bid(i, everyone);
      if (b < low)
      {
        low = b;
        argmin = i;
      }
    }
    const double value = low * static_cast<double>(current.size());
    if (value > best.value + kTolerance || best.set.empty())
    {
      best.value = value;
      best.price = low;
      best.set = current;
    }
    current.erase(argmin);
  }
  if (best.value <= 0.0)
  {
    // zero revenue is reported with the empty witness
    best = BenchmarkResult{};
    best.k = min_size;
  }
  return best;
}

BenchmarkResult benchmark_sweep(const BidOracle &bids, std::size_t k)
{
  if (k == 0)
  {
    throw std::invalid_argument("benchmark needs k >= 1");
  }
  return revenue_given_free(bids, WinnerSet::all(bids.agent_count()), WinnerSet{}, k);
}

}  // namespace extauction
