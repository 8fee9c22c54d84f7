#include "extauction/truthfulness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "extauction/random_source.hpp"

namespace extauction {

namespace {

constexpr double kHugeBid = 1e9;

std::string render_vector(const std::vector<double> &values)
{
  std::ostringstream out;
  out.precision(12);
  out << '(';
  for (std::size_t j = 0; j < values.size(); ++j)
  {
    out << (j ? "," : "") << values[j];
  }
  out << ')';
  return out.str();
}

/// Allocation at every point of the agent's grid for one context.
std::vector<WinnerSet> allocation_axis(const SingleParamRule &rule, AgentId agent, std::span<const double> context)
{
  std::vector<double> bids(context.begin(), context.end());
  const std::vector<double> &grid = rule.grids.at(agent);
  std::vector<WinnerSet> axis;
  axis.reserve(grid.size());
  for (double x : grid)
  {
    bids[agent] = x;
    axis.push_back(rule.allocation(bids));
  }
  return axis;
}

std::pair<double, double> comparison_span(const std::vector<double> &grid)
{
  const double lo = grid.front();
  const double hi = grid.back();
  return {lo, hi > lo ? hi : lo + 1.0};
}

void append_monotone_violations(const SingleParamRule &rule, AgentId agent, const std::vector<double> &context,
                                const std::vector<WinnerSet> &axis, std::vector<RuleViolation> &out)
{
  const std::vector<double> &grid = rule.grids[agent];
  for (std::size_t low = 0; low < axis.size(); ++low)
  {
    if (!axis[low].contains(agent))
    {
      continue;
    }
    for (std::size_t high = low + 1; high < axis.size(); ++high)
    {
      if (!axis[high].contains(agent))
      {
        out.push_back({agent, context, grid[low], grid[high], axis[low], axis[high]});
      }
    }
  }
}

void append_order_violations(const SingleParamRule &rule, AgentId agent, const AgentModel &model,
                             const std::vector<double> &context, const std::vector<WinnerSet> &axis,
                             std::vector<RuleViolation> &out)
{
  const std::vector<double> &grid = rule.grids[agent];
  const auto [lo, hi] = comparison_span(grid);
  for (std::size_t low = 0; low < axis.size(); ++low)
  {
    for (std::size_t high = low + 1; high < axis.size(); ++high)
    {
      if (axis[high] != axis[low] && compare_sets(model, agent, axis[high], axis[low], lo, hi) < 0)
      {
        out.push_back({agent, context, grid[low], grid[high], axis[low], axis[high]});
      }
    }
  }
}

double interval_inf(const BreakpointPartition &partition, const BidInterval &interval, WinnerSet s,
                    const AgentModel &model)
{
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = interval.first; k <= interval.last; ++k)
  {
    best = std::min(best, single_parameter_value(model, partition.grid[k], partition.agent, s));
  }
  return best;
}

BreakpointPartition prepare_partition(const SingleParamRule &rule, AgentId agent, std::span<const double> context,
                                      const AgentModel &model)
{
  if (!private_parameter(model))
  {
    throw RuleRejected("characterization needs a single-parameter valuation model");
  }
  BreakpointPartition partition;
  partition.agent = agent;
  partition.grid = rule.grids.at(agent);
  partition.allocation = allocation_axis(rule, agent, context);

  const std::vector<double> ctx(context.begin(), context.end());
  std::vector<RuleViolation> violations;
  append_monotone_violations(rule, agent, ctx, partition.allocation, violations);
  append_order_violations(rule, agent, model, ctx, partition.allocation, violations);
  if (!violations.empty())
  {
    throw RuleRejected("rule cannot be truthfully implemented: " + violations.front().describe());
  }
  return partition;
}

/// Fills interval_of and d once intervals are known. `representative[j]` is any set of class j.
void finish_partition(BreakpointPartition &partition, const std::vector<WinnerSet> &representative,
                      const AgentModel &model)
{
  partition.interval_of.assign(partition.grid.size(), 0);
  for (std::size_t j = 0; j < partition.intervals.size(); ++j)
  {
    for (std::size_t k = partition.intervals[j].first; k <= partition.intervals[j].last; ++k)
    {
      partition.interval_of[k] = j;
    }
  }
  partition.d.clear();
  for (std::size_t j = 0; j + 1 < partition.intervals.size(); ++j)
  {
    const WinnerSet s = representative[j];
    partition.d.push_back(interval_inf(partition, partition.intervals[j + 1], s, model) -
                          interval_inf(partition, partition.intervals[j], s, model));
  }
}

}  // namespace

std::vector<double> even_grid(double lo, double hi, std::size_t count)
{
  if (count == 0)
  {
    return {};
  }
  if (count == 1)
  {
    return {lo};
  }
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k)
  {
    grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  return grid;
}

SingleParamRule threshold_rule(std::vector<std::vector<double>> grids, double price)
{
  SingleParamRule rule;
  rule.grids = std::move(grids);
  rule.allocation = [price](std::span<const double> bids) {
    WinnerSet s;
    for (AgentId j = 0; j < bids.size(); ++j)
    {
      if (bids[j] >= price)
      {
        s.insert(j);
      }
    }
    return s;
  };
  return rule;
}

void for_each_context(const SingleParamRule &rule, AgentId agent,
                      const std::function<void(std::vector<double> &)> &visit)
{
  const std::size_t n = rule.agent_count();
  std::vector<std::size_t> index(n, 0);
  std::vector<double> bids(n);
  for (AgentId j = 0; j < n; ++j)
  {
    bids[j] = rule.grids[j].front();
  }
  while (true)
  {
    visit(bids);
    // odometer over every agent except `agent`
    AgentId j = 0;
    for (; j < n; ++j)
    {
      if (j == agent)
      {
        continue;
      }
      if (++index[j] < rule.grids[j].size())
      {
        bids[j] = rule.grids[j][index[j]];
        break;
      }
      index[j] = 0;
      bids[j] = rule.grids[j].front();
    }
    if (j == n)
    {
      return;
    }
  }
}

std::string RuleViolation::describe() const
{
  std::ostringstream out;
  out.precision(12);
  out << "agent " << agent << " in context " << render_vector(context) << ": bid " << low_bid << " -> "
      << low_set.to_string() << ", bid " << high_bid << " -> " << high_set.to_string();
  return out.str();
}

std::vector<RuleViolation> check_bid_independent_monotone(const SingleParamRule &rule, AgentId agent)
{
  std::vector<RuleViolation> out;
  for_each_context(rule, agent, [&](std::vector<double> &context) {
    append_monotone_violations(rule, agent, context, allocation_axis(rule, agent, context), out);
  });
  return out;
}

int compare_sets(const AgentModel &model, AgentId agent, WinnerSet s1, WinnerSet s2, double lo, double hi)
{
  const double g_lo = single_parameter_value(model, lo, agent, s1) - single_parameter_value(model, lo, agent, s2);
  const double g_hi = single_parameter_value(model, hi, agent, s1) - single_parameter_value(model, hi, agent, s2);
  const double change = g_hi - g_lo;
  if (std::abs(change) <= kTolerance * std::max(1.0, hi - lo))
  {
    return 0;
  }
  return change > 0 ? 1 : -1;
}

std::vector<RuleViolation> check_encourages_higher_bids(const SingleParamRule &rule, AgentId agent,
                                                        const AgentModel &model)
{
  std::vector<RuleViolation> out;
  for_each_context(rule, agent, [&](std::vector<double> &context) {
    append_order_violations(rule, agent, model, context, allocation_axis(rule, agent, context), out);
  });
  return out;
}

BreakpointPartition discover_breakpoints(const SingleParamRule &rule, AgentId agent, std::span<const double> context,
                                         const AgentModel &model)
{
  BreakpointPartition partition = prepare_partition(rule, agent, context, model);
  const auto [lo, hi] = comparison_span(partition.grid);
  std::vector<WinnerSet> representative;
  for (std::size_t k = 0; k < partition.grid.size(); ++k)
  {
    const WinnerSet s = partition.allocation[k];
    if (representative.empty() || compare_sets(model, agent, s, representative.back(), lo, hi) != 0)
    {
      partition.intervals.push_back({k, k});
      representative.push_back(s);
    }
    else
    {
      partition.intervals.back().last = k;
    }
  }
  finish_partition(partition, representative, model);
  return partition;
}

BreakpointPartition discover_breakpoints_descending(const SingleParamRule &rule, AgentId agent,
                                                    std::span<const double> context, const AgentModel &model)
{
  BreakpointPartition partition = prepare_partition(rule, agent, context, model);
  const auto [lo, hi] = comparison_span(partition.grid);
  std::vector<WinnerSet> representative;
  for (std::size_t k = partition.grid.size(); k-- > 0;)
  {
    const WinnerSet s = partition.allocation[k];
    if (representative.empty() || compare_sets(model, agent, s, representative.back(), lo, hi) != 0)
    {
      partition.intervals.push_back({k, k});
      representative.push_back(s);
    }
    else
    {
      partition.intervals.back().first = k;
    }
  }
  std::reverse(partition.intervals.begin(), partition.intervals.end());
  std::reverse(representative.begin(), representative.end());
  finish_partition(partition, representative, model);
  return partition;
}

double payment_from_characterization(const BreakpointPartition &partition, std::size_t grid_index,
                                     const AgentModel &model)
{
  const WinnerSet s = partition.allocation.at(grid_index);
  if (!s.contains(partition.agent))
  {
    return 0.0;
  }
  const std::size_t level = partition.interval_of[grid_index];
  double payment = interval_inf(partition, partition.intervals[level], s, model);
  for (std::size_t j = 0; j < level; ++j)
  {
    payment -= partition.d[j];
  }
  return payment;
}

Outcome characterized_mechanism(const SingleParamRule &rule, std::span<const double> bids,
                                std::span<const AgentModel> models)
{
  Outcome out = empty_outcome(rule.agent_count());
  out.winners = rule.allocation(bids);
  for (AgentId i : out.winners)
  {
    const std::vector<double> &grid = rule.grids.at(i);
    const auto it = std::find(grid.begin(), grid.end(), bids[i]);
    if (it == grid.end())
    {
      throw std::invalid_argument("bid is not on the agent's grid");
    }
    const BreakpointPartition partition = discover_breakpoints(rule, i, bids, models[i]);
    out.payments[i] =
        payment_from_characterization(partition, static_cast<std::size_t>(it - grid.begin()), models[i]);
    out.revenue += out.payments[i];
  }
  return out;
}

std::string GridDeviation::describe() const
{
  std::ostringstream out;
  out.precision(12);
  out << "agent " << agent << " in context " << render_vector(context) << " with type " << true_type
      << " gains by bidding " << misreport << ": " << deviating_utility << " > " << truthful_utility;
  return out.str();
}

std::vector<GridDeviation> grid_deviation_test(const SingleParamRule &rule, AgentId agent, const AgentModel &model)
{
  std::vector<GridDeviation> out;
  for_each_context(rule, agent, [&](std::vector<double> &context) {
    const BreakpointPartition partition = discover_breakpoints(rule, agent, context, model);
    const std::size_t g = partition.grid.size();
    std::vector<double> payment(g);
    for (std::size_t k = 0; k < g; ++k)
    {
      payment[k] = payment_from_characterization(partition, k, model);
    }
    auto utility_at = [&](std::size_t type, std::size_t bid) {
      return single_parameter_value(model, partition.grid[type], agent, partition.allocation[bid]) - payment[bid];
    };
    for (std::size_t type = 0; type < g; ++type)
    {
      const double truthful = utility_at(type, type);
      for (std::size_t bid = 0; bid < g; ++bid)
      {
        const double deviating = utility_at(type, bid);
        if (deviating > truthful + kTolerance)
        {
          out.push_back({agent, context, partition.grid[type], partition.grid[bid], truthful, deviating});
        }
      }
    }
  });
  return out;
}

std::vector<Misreport> parameter_misreports(const ValuationProfile &truth, AgentId agent,
                                            std::span<const double> values)
{
  const AgentModel model = truth.agent(agent);
  std::vector<Misreport> out;
  for (double t : values)
  {
    std::ostringstream label;
    label.precision(12);
    label << "parameter " << t;
    out.push_back({label.str(), [model, agent, t](WinnerSet s) { return single_parameter_value(model, t, agent, s); }});
  }
  return out;
}

std::vector<Misreport> structured_misreports(const ValuationProfile &truth, AgentId agent, std::size_t count,
                                             std::uint64_t seed)
{
  const std::size_t n = truth.n();
  const AgentModel model = truth.agent(agent);
  auto value = [model, agent](WinnerSet s) { return s.contains(agent) ? raw_model_value(model, agent, s) : 0.0; };
  const double top = std::max(value(WinnerSet::all(n)), 1.0);

  std::vector<Misreport> out;
  for (double scale : {0.0, 0.1, 0.5, 0.9, 0.999, 1.001, 1.1, 2.0, 10.0, 1e6})
  {
    out.push_back({"scale " + std::to_string(scale), [value, scale](WinnerSet s) { return scale * value(s); }});
  }
  out.push_back({"zero", [](WinnerSet) { return 0.0; }});
  out.push_back({"huge", [agent](WinnerSet s) { return s.contains(agent) ? kHugeBid : 0.0; }});
  for (double level : {0.25, 0.5, 0.75, 1.0, 1.5})
  {
    const double c = level * top;
    out.push_back({"constant " + std::to_string(c), [c](WinnerSet) { return c; }});
  }
  for (std::size_t k = 1; k <= n; ++k)
  {
    out.push_back({"huge from size " + std::to_string(k),
                   [k](WinnerSet s) { return s.size() >= k ? kHugeBid : 0.0; }});
    out.push_back({"huge below size " + std::to_string(k),
                   [k](WinnerSet s) { return s.size() < k ? kHugeBid : 0.0; }});
  }
  if (const auto t = private_parameter(model))
  {
    for (double factor : {0.0, 0.5, 0.9, 1.1, 2.0, 5.0})
    {
      const double alt = factor * *t;
      out.push_back({"parameter " + std::to_string(alt),
                     [model, agent, alt](WinnerSet s) { return single_parameter_value(model, alt, agent, s); }});
    }
  }

  RandomSource rng(seed);
  for (std::uint64_t k = 0; out.size() < count; ++k)
  {
    const std::uint64_t salt = rng.next_u64();
    // uniform in [-1, 1), fixed per (misreport, set)
    auto noise = [salt](WinnerSet s) {
      return static_cast<double>(mix64(salt ^ mix64(s.mask())) >> 11) * 0x1.0p-52 - 1.0;
    };
    switch (k % 4)
    {
    case 0: {
      const double sigma = rng.uniform(0.05, 2.0);
      out.push_back({"multiplicative noise " + std::to_string(k),
                     [value, noise, sigma](WinnerSet s) { return value(s) * std::exp(sigma * noise(s)); }});
      break;
    }
    case 1: {
      const double spread = rng.uniform(0.0, top);
      out.push_back({"additive noise " + std::to_string(k), [value, noise, spread](WinnerSet s) {
                       return std::max(0.0, value(s) + spread * noise(s));
                     }});
      break;
    }
    case 2: {
      const double c = rng.uniform(0.0, 2.0 * top);
      out.push_back({"constant " + std::to_string(c), [c](WinnerSet) { return c; }});
      break;
    }
    default: {
      // random subsets get a huge report, the rest zero
      out.push_back({"random huge/zero " + std::to_string(k),
                     [noise](WinnerSet s) { return noise(s) > 0.0 ? kHugeBid : 0.0; }});
      break;
    }
    }
  }
  out.resize(count);
  return out;
}

std::string DeviationViolation::describe() const
{
  std::ostringstream out;
  out.precision(12);
  out << "realization " << realization << ", agent " << agent << " gains by '" << misreport
      << "': " << deviating_utility << " > " << truthful_utility;
  return out.str();
}

DeviationReport deviation_test(std::span<const Realization> realizations, const ValuationProfile &truth,
                               const DeviationPlan &plan)
{
  std::vector<AgentId> agents = plan.agents;
  if (agents.empty())
  {
    for (AgentId i = 0; i < truth.n(); ++i)
    {
      agents.push_back(i);
    }
  }
  std::vector<std::vector<Misreport>> misreports;
  misreports.reserve(agents.size());
  for (AgentId i : agents)
  {
    misreports.push_back(plan.misreports(truth, i));
  }

  DeviationReport report;
  for (std::size_t r = 0; r < realizations.size(); ++r)
  {
    const Outcome truthful = realizations[r](truth);
    for (std::size_t a = 0; a < agents.size(); ++a)
    {
      const AgentId i = agents[a];
      const double honest = utility(truth, truthful, i);
      for (const Misreport &m : misreports[a])
      {
        const MisreportOracle lie(truth, i, m.report);
        const double deviating = utility(truth, realizations[r](lie), i);
        ++report.checks;
        if (deviating > honest + kTolerance)
        {
          report.violations.push_back({r, i, m.label, honest, deviating});
        }
      }
    }
  }
  return report;
}

std::vector<Realization> main_mechanism_realizations(std::size_t n, std::size_t count, std::uint64_t seed,
                                                     bool exhaustive)
{
  std::vector<Realization> out;
  if (exhaustive)
  {
    if (n > kMaxExactExpectationAgents)
    {
      throw std::invalid_argument("exhaustive partitions support n <= 10");
    }
    const std::uint64_t total = partition_count(n);
    out.reserve(total);
    for (std::uint64_t index = 0; index < total; ++index)
    {
      out.push_back([p = Partition3::from_index(n, index)](const BidOracle &bids) { return main_mechanism(bids, p); });
    }
    return out;
  }
  RandomSource rng(seed);
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
  {
    out.push_back([p = Partition3::sample(n, rng)](const BidOracle &bids) { return main_mechanism(bids, p); });
  }
  return out;
}

std::vector<Realization> fixed_price_realizations(std::span<const double> prices)
{
  std::vector<Realization> out;
  for (double price : prices)
  {
    out.push_back([price](const BidOracle &bids) { return fixed_price_mechanism(bids, price); });
  }
  return out;
}

std::vector<Realization> pay_your_bid_realizations(std::span<const double> prices)
{
  std::vector<Realization> out;
  for (double price : prices)
  {
    out.push_back([price](const BidOracle &bids) { return pay_your_bid_mechanism(bids, price); });
  }
  return out;
}

std::vector<Realization> mechanism2_realizations(const ValuationProfile &profile, double alpha, std::size_t count,
                                                 std::uint64_t seed)
{
  auto shared = std::make_shared<const ValuationProfile>(profile);
  std::vector<Realization> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
  {
    // the draws do not depend on the bids, so a fresh stream per call replays the same coins
    const std::uint64_t s = derive_seed({seed, static_cast<std::uint64_t>(k)});
    out.push_back([shared, alpha, s](const BidOracle &bids) {
      RandomSource rng(s);
      return mechanism2(*shared, bids, alpha, Rsop(), rng);
    });
  }
  return out;
}

std::vector<double> candidate_prices(const ValuationProfile &truth, std::size_t count, std::uint64_t seed)
{
  const std::size_t n = truth.n();
  const WinnerSet everyone = WinnerSet::all(n);
  double top = 0.0;
  for (AgentId i = 0; i < n; ++i)
  {
    top = std::max(top, truth.value(i, everyone));
  }
  RandomSource rng(seed);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
  {
    if (k % 2 == 0)
    {
      const AgentId i = rng.below(n);
      const WinnerSet s = WinnerSet(rng.next_u64() & everyone.mask()).with(i);
      out.push_back(truth.value(i, s));
    }
    else
    {
      out.push_back(rng.uniform(0.0, top));
    }
  }
  return out;
}

}  // namespace extauction
