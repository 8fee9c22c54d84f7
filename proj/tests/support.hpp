// Test-only reference implementations and random generators.
//
// The reference implementations deliberately avoid the library's algorithms: they enumerate
// subsets recursively and use the characterizations directly (largest feasible set, best
// subset) rather than deletion sweeps.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "extauction/experiments.hpp"
#include "extauction/mechanisms.hpp"
#include "extauction/random_source.hpp"
#include "extauction/truthfulness.hpp"
#include "extauction/valuations.hpp"

namespace testing_support {

using namespace extauction;
using Rational = boost::multiprecision::cpp_rational;

inline std::vector<std::vector<AgentId>> subsets_of(const std::vector<AgentId> &items)
{
  std::vector<std::vector<AgentId>> out{{}};
  for (AgentId x : items)
  {
    const std::size_t count = out.size();
    for (std::size_t k = 0; k < count; ++k)
    {
      std::vector<AgentId> with = out[k];
      with.push_back(x);
      out.push_back(std::move(with));
    }
  }
  return out;
}

inline WinnerSet to_set(const std::vector<AgentId> &members)
{
  WinnerSet s;
  for (AgentId i : members)
  {
    s.insert(i);
  }
  return s;
}

inline std::vector<AgentId> to_vector(WinnerSet s)
{
  return s.members();
}

/// max over |S| >= k of |S| * min_{i in S} b_i(S).
inline double reference_benchmark(const BidOracle &bids, std::size_t k)
{
  std::vector<AgentId> everyone;
  for (AgentId i = 0; i < bids.agent_count(); ++i)
  {
    everyone.push_back(i);
  }
  double best = 0.0;
  for (const auto &members : subsets_of(everyone))
  {
    if (members.size() < k || members.empty())
    {
      continue;
    }
    const WinnerSet s = to_set(members);
    double low = std::numeric_limits<double>::infinity();
    for (AgentId i : members)
    {
      low = std::min(low, bids.bid(i, s));
    }
    best = std::max(best, low * static_cast<double>(members.size()));
  }
  return best;
}

/// Best fixed-price revenue from subsets T of `pool` while `free` holds the good.
inline double reference_revenue_given_free(const BidOracle &bids, WinnerSet pool, WinnerSet free)
{
  double best = 0.0;
  for (const auto &members : subsets_of(to_vector(pool)))
  {
    if (members.empty())
    {
      continue;
    }
    const WinnerSet everyone = to_set(members) | free;
    double low = std::numeric_limits<double>::infinity();
    for (AgentId i : members)
    {
      low = std::min(low, bids.bid(i, everyone));
    }
    best = std::max(best, low * static_cast<double>(members.size()));
  }
  return best;
}

/// Largest T ⊆ x with b_i(T ∪ y) >= r/|T| for all i in T (the union of all such sets).
inline WinnerSet reference_cost_share_winners(const BidOracle &bids, double r, WinnerSet x, WinnerSet y)
{
  WinnerSet best;
  for (const auto &members : subsets_of(to_vector(x)))
  {
    if (members.empty())
    {
      continue;
    }
    const WinnerSet t = to_set(members);
    const double share = r / static_cast<double>(members.size());
    bool feasible = true;
    for (AgentId i : members)
    {
      feasible = feasible && bids.bid(i, t | y) >= share;
    }
    if (feasible && t.size() > best.size())
    {
      best = t;
    }
  }
  return best;
}

/// Expected main-mechanism revenue by recursion over labels.
inline double reference_main_expectation(const BidOracle &bids)
{
  const std::size_t n = bids.agent_count();
  double total = 0.0;
  std::function<void(AgentId, WinnerSet, WinnerSet, WinnerSet)> recurse = [&](AgentId i, WinnerSet a, WinnerSet b,
                                                                               WinnerSet c) {
    if (i == n)
    {
      const double r = std::max(reference_revenue_given_free(bids, c, a), reference_revenue_given_free(bids, c, b));
      if (!reference_cost_share_winners(bids, r, b, a).empty())
      {
        total += r;
      }
      return;
    }
    recurse(i + 1, a.with(i), b, c);
    recurse(i + 1, a, b.with(i), c);
    recurse(i + 1, a, b, c.with(i));
  };
  recurse(0, {}, {}, {});
  return total / std::pow(3.0, static_cast<double>(n));
}

/// E[min(a, b, c)] by enumerating all 3^m labelings.
inline Rational reference_min_expectation(unsigned m)
{
  std::uint64_t total = 1;
  for (unsigned j = 0; j < m; ++j)
  {
    total *= 3;
  }
  boost::multiprecision::cpp_int weighted = 0;
  for (std::uint64_t code = 0; code < total; ++code)
  {
    unsigned counts[3] = {0, 0, 0};
    std::uint64_t rest = code;
    for (unsigned j = 0; j < m; ++j)
    {
      ++counts[rest % 3];
      rest /= 3;
    }
    weighted += std::min({counts[0], counts[1], counts[2]});
  }
  return Rational(weighted, boost::multiprecision::cpp_int(total));
}

/// Pr(a <= m/9), a ~ Binomial(m, 1/3), by dynamic programming over the items.
inline Rational reference_tail(unsigned m)
{
  std::vector<Rational> dist{Rational(1)};
  const Rational third(1, 3);
  const Rational two_thirds(2, 3);
  for (unsigned j = 0; j < m; ++j)
  {
    std::vector<Rational> next(dist.size() + 1, Rational(0));
    for (std::size_t a = 0; a < dist.size(); ++a)
    {
      next[a] += dist[a] * two_thirds;
      next[a + 1] += dist[a] * third;
    }
    dist = std::move(next);
  }
  Rational out(0);
  for (std::size_t a = 0; a < dist.size(); ++a)
  {
    if (9 * a <= m)
    {
      out += dist[a];
    }
  }
  return out;
}

/// max over agents and pairs S, R containing i of v(S ∪ R) / (v(S) + v(R)), at least 1.
inline double reference_L(const ValuationProfile &p)
{
  const std::size_t n = p.n();
  const std::uint64_t count = std::uint64_t{1} << n;
  double best = 1.0;
  for (AgentId i = 0; i < n; ++i)
  {
    for (std::uint64_t a = 0; a < count; ++a)
    {
      for (std::uint64_t b = 0; b < count; ++b)
      {
        const WinnerSet s(a);
        const WinnerSet r(b);
        if (!s.contains(i) || !r.contains(i))
        {
          continue;
        }
        const double denominator = p.value(i, s) + p.value(i, r);
        const double numerator = p.value(i, s | r);
        if (denominator <= 0.0)
        {
          if (numerator > 0.0)
          {
            return std::numeric_limits<double>::infinity();
          }
          continue;
        }
        best = std::max(best, numerator / denominator);
      }
    }
  }
  return best;
}

/// Table valuations that are monotone but otherwise arbitrary (not necessarily subadditive).
inline ValuationProfile random_monotone_tables(std::size_t n, RandomSource &rng, bool integer_values = false)
{
  const std::size_t count = std::size_t{1} << n;
  std::vector<AgentModel> agents;
  for (AgentId i = 0; i < n; ++i)
  {
    std::vector<double> values(count, 0.0);
    for (std::size_t mask = 0; mask < count; ++mask)
    {
      const WinnerSet s(mask);
      if (!s.contains(i))
      {
        continue;
      }
      double v = integer_values ? static_cast<double>(rng.below(4)) : rng.uniform(0.0, 5.0);
      for (AgentId j : s)
      {
        if (j != i)
        {
          v = std::max(v, values[s.without(j).mask()]);
        }
      }
      values[mask] = v;
    }
    agents.push_back(TableValuation{std::move(values)});
  }
  return ValuationProfile(std::move(agents));
}

/// Random generator settings for a valid instance of the given size.
inline GeneratorConfig random_generator_config(std::size_t n, RandomSource &rng)
{
  static const ModelFamily families[] = {ModelFamily::Table, ModelFamily::Additive, ModelFamily::Scalar,
                                         ModelFamily::Linear, ModelFamily::GraphConcave};
  GeneratorConfig g;
  g.family = families[rng.below(n <= kMaxTableAgents ? 5 : 4) + (n <= kMaxTableAgents ? 0 : 1)];
  g.n = n;
  g.seed = rng.next_u64();
  g.graph = rng.coin() ? GraphKind::ErdosRenyi : GraphKind::PreferentialAttachment;
  g.edge_probability = rng.uniform(0.0, 1.0);
  g.attachment_edges = 1 + rng.below(3);
  g.beta = rng.uniform(0.0, 3.0);
  g.shape = static_cast<ConcaveShape>(rng.below(3));
  g.table_sampler = rng.coin() ? TableSampler::Monotone : TableSampler::Xos;
  g.table_weights = rng.coin();
  g.integer_t = rng.coin();
  g.t_min = g.integer_t ? 0.0 : rng.uniform(0.0, 2.0);
  g.t_max = g.t_min + rng.uniform(0.0, 10.0);
  return g;
}

// ---------------------------------------------------------------------------
// Random single-parameter rules
// ---------------------------------------------------------------------------

struct RandomRule
{
  SingleParamRule rule;
  std::vector<AgentModel> models;
};

inline std::vector<double> random_grid(RandomSource &rng, std::size_t size)
{
  std::vector<double> grid = even_grid(0.0, 10.0, size);
  const double shift = rng.uniform(0.0, 0.5);
  for (double &x : grid)
  {
    x += shift;
  }
  return grid;
}

inline AgentModel random_rule_model(RandomSource &rng, std::size_t n, AgentId i)
{
  switch (rng.below(3))
  {
  case 0: {
    std::vector<double> w(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k)
    {
      w[k] = w[k - 1] + rng.uniform(0.2, 1.0);
    }
    return ScalarValuation{1.0, SetWeight::cardinality(w)};
  }
  case 1: {
    std::vector<double> w(n + 1, 0.0);
    std::vector<double> offset(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k)
    {
      w[k] = w[k - 1] + rng.uniform(0.2, 1.0);
      offset[k] = offset[k - 1] + rng.uniform(0.0, 2.0);
    }
    return LinearValuation{1.0, SetWeight::cardinality(w), SetWeight::cardinality(offset)};
  }
  default: {
    WinnerSet friends = WinnerSet::all(n).without(i);
    return GraphConcaveValuation{1.0, rng.uniform(0.5, 2.0), static_cast<ConcaveShape>(rng.below(3)), friends};
  }
  }
}

/// Agent j wins iff b_j >= base_j - sum_k c_jk b_k. Raising any bid only adds winners, so the
/// rule is monotone and never moves an agent to a lower class under the models above.
inline RandomRule passing_rule(RandomSource &rng, std::size_t n, std::size_t grid_size)
{
  RandomRule out;
  std::vector<double> base(n);
  std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
  for (AgentId j = 0; j < n; ++j)
  {
    out.rule.grids.push_back(random_grid(rng, grid_size));
    out.models.push_back(random_rule_model(rng, n, j));
    base[j] = rng.uniform(2.0, 12.0);
    for (AgentId k = 0; k < n; ++k)
    {
      c[j][k] = k == j ? 0.0 : rng.uniform(0.0, 0.4);
    }
  }
  out.rule.allocation = [base, c](std::span<const double> bids) {
    WinnerSet s;
    for (AgentId j = 0; j < bids.size(); ++j)
    {
      double threshold = base[j];
      for (AgentId k = 0; k < bids.size(); ++k)
      {
        threshold -= c[j][k] * bids[k];
      }
      if (bids[j] >= threshold)
      {
        s.insert(j);
      }
    }
    return s;
  };
  return out;
}

inline bool rule_passes_checks(const RandomRule &r)
{
  for (AgentId i = 0; i < r.rule.agent_count(); ++i)
  {
    if (!check_bid_independent_monotone(r.rule, i).empty() ||
        !check_encourages_higher_bids(r.rule, i, r.models[i]).empty())
    {
      return false;
    }
  }
  return true;
}

/// Either an arbitrary hashed allocation or a rule where other agents' higher bids push j out.
/// Callers keep only rules that actually fail a check.
inline RandomRule failing_rule_candidate(RandomSource &rng, std::size_t n, std::size_t grid_size)
{
  RandomRule out;
  for (AgentId j = 0; j < n; ++j)
  {
    out.rule.grids.push_back(random_grid(rng, grid_size));
    out.models.push_back(random_rule_model(rng, n, j));
  }
  if (rng.coin())
  {
    const std::uint64_t salt = rng.next_u64();
    out.rule.allocation = [salt, n](std::span<const double> bids) {
      std::uint64_t h = salt;
      for (double b : bids)
      {
        h = mix64(h ^ static_cast<std::uint64_t>(b * 1024.0));
      }
      return WinnerSet(h & WinnerSet::all(n).mask());
    };
    return out;
  }
  std::vector<double> base(n);
  for (double &b : base)
  {
    b = rng.uniform(0.0, 6.0);
  }
  const double push = rng.uniform(0.3, 1.0);
  out.rule.allocation = [base, push](std::span<const double> bids) {
    WinnerSet s;
    for (AgentId j = 0; j < bids.size(); ++j)
    {
      double threshold = base[j];
      for (AgentId k = 0; k < bids.size(); ++k)
      {
        threshold += k == j ? 0.0 : push * bids[k];
      }
      if (bids[j] >= threshold)
      {
        s.insert(j);
      }
    }
    return s;
  };
  return out;
}

/// True if synthesis rejects the rule or a profitable grid deviation exists for some agent.
inline bool rule_is_caught(const RandomRule &r)
{
  for (AgentId i = 0; i < r.rule.agent_count(); ++i)
  {
    try
    {
      if (!grid_deviation_test(r.rule, i, r.models[i]).empty())
      {
        return true;
      }
    }
    catch (const RuleRejected &)
    {
      return true;
    }
  }
  return false;
}

}  // namespace testing_support
