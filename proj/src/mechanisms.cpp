#include "extauction/mechanisms.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "extauction/benchmark.hpp"

namespace extauction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_additive(const ValuationProfile &profile, double alpha)
{
  if (!profile.all_additive())
  {
    throw std::invalid_argument("Mechanism-2 requires additive valuations for every agent");
  }
  if (!(alpha > 0.0))
  {
    throw std::invalid_argument("Mechanism-2 requires alpha > 0");
  }
}

const SetWeight &public_weight(const ValuationProfile &profile, AgentId i)
{
  return std::get<AdditiveValuation>(profile.agent(i)).w;
}

}  // namespace

Outcome empty_outcome(std::size_t n)
{
  Outcome out;
  out.payments.assign(n, 0.0);
  return out;
}

double utility(const ValuationProfile &truth, const Outcome &outcome, AgentId i)
{
  const double value = outcome.winners.contains(i) ? truth.value(i, outcome.winners) : 0.0;
  return value - outcome.payments.at(i);
}

Partition3 Partition3::from_index(std::size_t n, std::uint64_t index)
{
  std::vector<Label> labels(n);
  for (std::size_t j = 0; j < n; ++j)
  {
    labels[j] = static_cast<Label>(index % 3);
    index /= 3;
  }
  return Partition3(std::move(labels));
}

Partition3 Partition3::sample(std::size_t n, RandomSource &rng)
{
  std::vector<Label> labels(n);
  for (std::size_t j = 0; j < n; ++j)
  {
    labels[j] = static_cast<Label>(rng.below(3));
  }
  return Partition3(std::move(labels));
}

WinnerSet Partition3::group(Label which) const
{
  WinnerSet s;
  for (std::size_t j = 0; j < labels_.size(); ++j)
  {
    if (labels_[j] == which)
    {
      s.insert(j);
    }
  }
  return s;
}

std::uint64_t partition_count(std::size_t n)
{
  std::uint64_t count = 1;
  for (std::size_t j = 0; j < n; ++j)
  {
    count *= 3;
  }
  return count;
}

Outcome fixed_price_mechanism(const BidOracle &bids, double price)
{
  if (!(price >= 0.0))
  {
    throw std::invalid_argument("fixed price must be nonnegative");
  }
  const std::size_t n = bids.agent_count();
  CountingOracle counted(bids);
  Outcome out = empty_outcome(n);
  out.winners = maximal_feasible_set(counted, price, WinnerSet::all(n), WinnerSet{});
  for (AgentId i : out.winners)
  {
    out.payments[i] = price;
  }
  out.revenue = price * static_cast<double>(out.winners.size());
  out.queries_used = counted.queries();
  return out;
}

Outcome cost_share(const BidOracle &bids, double r, WinnerSet x, WinnerSet y)
{
  if (!(r >= 0.0))
  {
    throw std::invalid_argument("cost share target must be nonnegative");
  }
  if (!x.disjoint(y))
  {
    throw std::invalid_argument("cost share groups must be disjoint");
  }
  CountingOracle counted(bids);
  Outcome out = empty_outcome(bids.agent_count());
  WinnerSet survivors = x;
  while (!survivors.empty())
  {
    const double share = r / static_cast<double>(survivors.size());
    const WinnerSet served = survivors | y;
    WinnerSet dropped;
    for (AgentId i : survivors)
    {
      if (counted.bid(i, served) < share)
      {
        dropped.insert(i);
      }
    }
    if (dropped.empty())
    {
      break;
    }
    survivors = survivors - dropped;
  }
  if (!survivors.empty())
  {
    const double share = r / static_cast<double>(survivors.size());
    out.winners = survivors;
    for (AgentId i : survivors)
    {
      out.payments[i] = share;
    }
    out.revenue = r;
  }
  out.queries_used = counted.queries();
  return out;
}

CostShareTarget cost_share_target(const BidOracle &bids, const Partition3 &partition)
{
  const WinnerSet c = partition.c();
  return {revenue_given_free(bids, c, partition.a()).value, revenue_given_free(bids, c, partition.b()).value};
}

Outcome main_mechanism(const BidOracle &bids, const Partition3 &partition)
{
  const std::size_t n = bids.agent_count();
  if (partition.size() != n)
  {
    throw std::invalid_argument("partition size does not match the market");
  }
  CountingOracle counted(bids);
  const WinnerSet a = partition.a();
  const double r = cost_share_target(counted, partition).target();
  Outcome out = cost_share(counted, r, partition.b(), a);
  out.winners = out.winners | a;
  out.queries_used = counted.queries();
  return out;
}

Outcome main_mechanism(const BidOracle &bids, RandomSource &rng)
{
  return main_mechanism(bids, Partition3::sample(bids.agent_count(), rng));
}

double main_mechanism_exact_expectation(const BidOracle &bids)
{
  const std::size_t n = bids.agent_count();
  if (n > kMaxExactExpectationAgents)
  {
    throw std::invalid_argument("exact expectation supports n <= 10");
  }
  const std::uint64_t count = partition_count(n);
  double total = 0.0;
  for (std::uint64_t index = 0; index < count; ++index)
  {
    total += main_mechanism(bids, Partition3::from_index(n, index)).revenue;
  }
  return total / static_cast<double>(count);
}

Outcome pay_your_bid_mechanism(const BidOracle &bids, double price)
{
  Outcome out = fixed_price_mechanism(bids, price);
  CountingOracle counted(bids);
  out.revenue = 0.0;
  for (AgentId i : out.winners)
  {
    out.payments[i] = counted.bid(i, out.winners);
    out.revenue += out.payments[i];
  }
  out.queries_used += counted.queries();
  return out;
}

double optimal_single_price(std::span<const double> bids, WinnerSet group)
{
  double best_price = kInf;
  double best_revenue = -1.0;
  for (AgentId candidate : group)
  {
    const double price = bids[candidate];
    std::size_t buyers = 0;
    for (AgentId j : group)
    {
      if (bids[j] >= price)
      {
        ++buyers;
      }
    }
    const double revenue = price * static_cast<double>(buyers);
    if (revenue > best_revenue || (revenue == best_revenue && price < best_price))
    {
      best_revenue = revenue;
      best_price = price;
    }
  }
  return best_price;
}

ClassicalOutcome Rsop::run_with_split(std::span<const double> bids, WinnerSet first_half)
{
  const std::size_t n = bids.size();
  const WinnerSet everyone = WinnerSet::all(n);
  const WinnerSet second_half = everyone - first_half;
  const double price_for_first = optimal_single_price(bids, second_half);
  const double price_for_second = optimal_single_price(bids, first_half);
  ClassicalOutcome out;
  out.prices.assign(n, 0.0);
  for (AgentId i = 0; i < n; ++i)
  {
    const double offer = first_half.contains(i) ? price_for_first : price_for_second;
    if (bids[i] >= offer)
    {
      out.winners.insert(i);
      out.prices[i] = offer;
    }
  }
  return out;
}

ClassicalOutcome Rsop::run(std::span<const double> bids, RandomSource &rng) const
{
  WinnerSet first;
  for (AgentId i = 0; i < bids.size(); ++i)
  {
    if (rng.coin())
    {
      first.insert(i);
    }
  }
  return run_with_split(bids, first);
}

std::vector<std::pair<double, ClassicalOutcome>> Rsop::distribution(std::span<const double> bids) const
{
  const std::size_t n = bids.size();
  if (n > 20)
  {
    throw std::invalid_argument("RSOP distribution enumeration supports n <= 20");
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  const double weight = 1.0 / static_cast<double>(count);
  std::vector<std::pair<double, ClassicalOutcome>> out;
  out.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask)
  {
    out.emplace_back(weight, run_with_split(bids, WinnerSet(mask)));
  }
  return out;
}

namespace {

/// Scalar bids viewed as set valuations without externalities.
class ScalarBids final : public BidOracle
{
public:
  explicit ScalarBids(std::span<const double> bids) : bids_(bids) {}
  std::size_t agent_count() const override { return bids_.size(); }
  double bid(AgentId i, WinnerSet s) const override { return s.contains(i) ? bids_[i] : 0.0; }

private:
  std::span<const double> bids_;
};

}  // namespace

ClassicalOutcome OptimalPriceOracle::run(std::span<const double> bids, RandomSource &) const
{
  const ScalarBids oracle(bids);
  const BenchmarkResult best = benchmark_sweep(oracle, min_winners_);
  ClassicalOutcome out;
  out.prices.assign(bids.size(), 0.0);
  out.winners = best.set;
  for (AgentId i : best.set)
  {
    out.prices[i] = best.price;
  }
  return out;
}

std::vector<std::pair<double, ClassicalOutcome>> OptimalPriceOracle::distribution(std::span<const double> bids) const
{
  RandomSource unused(0);
  return {{1.0, run(bids, unused)}};
}

std::vector<double> additive_reports(const ValuationProfile &public_part, const BidOracle &bids)
{
  const std::size_t n = public_part.n();
  std::vector<double> t(n);
  for (AgentId i = 0; i < n; ++i)
  {
    const WinnerSet alone = WinnerSet::singleton(i);
    const double reported = bids.bid(i, alone);
    if (reported == public_part.value(i, alone))
    {
      // subtracting w can round t + w - w away from t
      t[i] = std::get<AdditiveValuation>(public_part.agent(i)).t;
      continue;
    }
    // a report below the public part would mean a negative private value
    t[i] = std::max(0.0, reported - public_weight(public_part, i)(i, alone));
  }
  return t;
}

Outcome mechanism2_serve_everyone(const ValuationProfile &profile)
{
  require_additive(profile, 1.0);
  const std::size_t n = profile.n();
  Outcome out = empty_outcome(n);
  out.winners = WinnerSet::all(n);
  for (AgentId i = 0; i < n; ++i)
  {
    out.payments[i] = public_weight(profile, i)(i, out.winners);
    out.revenue += out.payments[i];
  }
  return out;
}

Outcome mechanism2_classical_branch(const ValuationProfile &profile, const ClassicalOutcome &classical)
{
  require_additive(profile, 1.0);
  Outcome out = empty_outcome(profile.n());
  out.winners = classical.winners;
  for (AgentId i : out.winners)
  {
    out.payments[i] = classical.prices[i] + public_weight(profile, i)(i, out.winners);
    out.revenue += out.payments[i];
  }
  return out;
}

Outcome mechanism2(const ValuationProfile &profile, const BidOracle &bids, double alpha,
                   const ClassicalMechanism &m0, RandomSource &rng)
{
  require_additive(profile, alpha);
  if (rng.bernoulli(1.0 / (1.0 + alpha)))
  {
    return mechanism2_serve_everyone(profile);
  }
  CountingOracle counted(bids);
  const std::vector<double> t = additive_reports(profile, counted);
  Outcome out = mechanism2_classical_branch(profile, m0.run(t, rng));
  out.queries_used = counted.queries();
  return out;
}

Outcome mechanism2(const ValuationProfile &profile, double alpha, const ClassicalMechanism &m0, RandomSource &rng)
{
  return mechanism2(profile, profile, alpha, m0, rng);
}

double mechanism2_exact_expectation(const ValuationProfile &profile, double alpha, const ClassicalMechanism &m0)
{
  require_additive(profile, alpha);
  const double everyone = mechanism2_serve_everyone(profile).revenue;
  const std::vector<double> t = additive_reports(profile, profile);
  double classical = 0.0;
  for (const auto &[probability, outcome] : m0.distribution(t))
  {
    classical += probability * mechanism2_classical_branch(profile, outcome).revenue;
  }
  return everyone / (1.0 + alpha) + alpha / (1.0 + alpha) * classical;
}

}  // namespace extauction
