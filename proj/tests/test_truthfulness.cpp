#include <gtest/gtest.h>

#include "extauction/experiments.hpp"
#include "extauction/truthfulness.hpp"
#include "support.hpp"

using namespace extauction;
using namespace testing_support;

namespace {

AgentModel unit_scalar(std::size_t n)
{
  std::vector<double> w(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
  {
    w[k] = static_cast<double>(k);
  }
  return ScalarValuation{1.0, SetWeight::cardinality(w)};
}

}  // namespace

TEST(Rules, EvenGrid)
{
  EXPECT_EQ(even_grid(0.0, 1.0, 3), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(even_grid(2.0, 5.0, 1), (std::vector<double>{2.0}));
  EXPECT_TRUE(even_grid(0.0, 1.0, 0).empty());
}

TEST(Rules, ContextsCoverTheProduct)
{
  const SingleParamRule rule = threshold_rule({even_grid(0, 1, 2), even_grid(0, 1, 3), even_grid(0, 1, 4)}, 0.5);
  std::size_t visits = 0;
  for_each_context(rule, 1, [&](std::vector<double> &) { ++visits; });
  EXPECT_EQ(visits, 8u);
}

TEST(Rules, ThresholdPaymentForSingleAgent)
{
  // wins from bid 4 on; pays the lowest winning bid times w({0}) = 1
  const SingleParamRule rule = threshold_rule({even_grid(0.0, 10.0, 11)}, 4.0);
  const AgentModel model = unit_scalar(1);
  const BreakpointPartition part = discover_breakpoints(rule, 0, std::vector<double>{0.0}, model);
  ASSERT_EQ(part.intervals.size(), 2u);
  EXPECT_EQ(part.intervals[1].first, 4u);
  EXPECT_DOUBLE_EQ(payment_from_characterization(part, 7, model), 4.0);
  EXPECT_DOUBLE_EQ(payment_from_characterization(part, 2, model), 0.0);
}

TEST(Rules, ThresholdRuleWithExternalities)
{
  // two agents, v_i = t * |S|; each pays threshold 3 times the winning set's weight
  const SingleParamRule rule = threshold_rule({even_grid(0, 6, 7), even_grid(0, 6, 7)}, 3.0);
  const std::vector<AgentModel> models{unit_scalar(2), unit_scalar(2)};
  for (AgentId i = 0; i < 2; ++i)
  {
    EXPECT_TRUE(check_bid_independent_monotone(rule, i).empty());
    EXPECT_TRUE(check_encourages_higher_bids(rule, i, models[i]).empty());
    EXPECT_TRUE(grid_deviation_test(rule, i, models[i]).empty());
  }
  const Outcome both = characterized_mechanism(rule, std::vector<double>{5.0, 4.0}, models);
  EXPECT_EQ(both.winners, (WinnerSet{0, 1}));
  EXPECT_DOUBLE_EQ(both.payments[0], 6.0);
  const Outcome one = characterized_mechanism(rule, std::vector<double>{5.0, 1.0}, models);
  EXPECT_EQ(one.winners, WinnerSet{0});
  EXPECT_DOUBLE_EQ(one.payments[0], 3.0);
  EXPECT_THROW(characterized_mechanism(rule, std::vector<double>{5.5, 1.0}, models), std::invalid_argument);
}

TEST(Rules, InvertedThresholdIsRejected)
{
  SingleParamRule rule;
  rule.grids = {even_grid(0, 4, 5)};
  rule.allocation = [](std::span<const double> b) { return b[0] <= 2.0 ? WinnerSet{0} : WinnerSet{}; };
  EXPECT_FALSE(check_bid_independent_monotone(rule, 0).empty());
  EXPECT_THROW(discover_breakpoints(rule, 0, std::vector<double>{0.0}, unit_scalar(1)), RuleRejected);
  EXPECT_THROW(grid_deviation_test(rule, 0, unit_scalar(1)), RuleRejected);
}

TEST(Rules, ShrinkingSetBreaksOrder)
{
  // agent 0 always wins; agent 1 is dropped once agent 0 bids high
  SingleParamRule rule;
  rule.grids = {even_grid(0, 4, 5), even_grid(0, 4, 5)};
  rule.allocation = [](std::span<const double> b) { return b[0] >= 3.0 ? WinnerSet{0} : WinnerSet{0, 1}; };
  EXPECT_TRUE(check_bid_independent_monotone(rule, 0).empty());
  const auto violations = check_encourages_higher_bids(rule, 0, unit_scalar(2));
  ASSERT_FALSE(violations.empty());
  EXPECT_EQ(violations.front().low_set, (WinnerSet{0, 1}));
  EXPECT_EQ(violations.front().high_set, WinnerSet{0});
}

TEST(Rules, TableModelsHaveNoCharacterization)
{
  const SingleParamRule rule = threshold_rule({even_grid(0, 4, 5)}, 2.0);
  const AgentModel table = TableValuation{{0.0, 1.0}};
  EXPECT_THROW(discover_breakpoints(rule, 0, std::vector<double>{0.0}, table), RuleRejected);
}

TEST(Rules, CompareSetsByModel)
{
  const AgentModel additive = AdditiveValuation{1.0, SetWeight::cardinality({0, 1, 5})};
  // additive: every pair of winning sets is one class
  EXPECT_EQ(compare_sets(additive, 0, WinnerSet{0, 1}, WinnerSet{0}, 0.0, 5.0), 0);
  EXPECT_EQ(compare_sets(additive, 0, WinnerSet{0}, WinnerSet{}, 0.0, 5.0), 1);
  EXPECT_EQ(compare_sets(unit_scalar(2), 0, WinnerSet{0}, WinnerSet{0, 1}, 0.0, 5.0), -1);
}

// Property: random rules that pass both checks have no profitable grid deviation, and
// ascending and descending scans agree.
TEST(Rules, PassingRulesAreTruthful)
{
  RandomSource rng(41);
  int accepted = 0;
  for (int attempt = 0; attempt < 400 && accepted < 30; ++attempt)
  {
    const RandomRule r = passing_rule(rng, 2 + rng.below(2), 6);
    if (!rule_passes_checks(r))
    {
      continue;
    }
    ++accepted;
    for (AgentId i = 0; i < r.rule.agent_count(); ++i)
    {
      EXPECT_TRUE(grid_deviation_test(r.rule, i, r.models[i]).empty());
      for_each_context(r.rule, i, [&](std::vector<double> &context) {
        const auto up = discover_breakpoints(r.rule, i, context, r.models[i]);
        const auto down = discover_breakpoints_descending(r.rule, i, context, r.models[i]);
        ASSERT_EQ(up.intervals.size(), down.intervals.size());
        for (std::size_t j = 0; j < up.intervals.size(); ++j)
        {
          EXPECT_EQ(up.intervals[j].first, down.intervals[j].first);
          EXPECT_EQ(up.intervals[j].last, down.intervals[j].last);
        }
        for (std::size_t k = 0; k < up.grid.size(); ++k)
        {
          EXPECT_NEAR(payment_from_characterization(up, k, r.models[i]),
                      payment_from_characterization(down, k, r.models[i]), 1e-9);
        }
      });
    }
  }
  EXPECT_EQ(accepted, 30);
}

TEST(Rules, FailingRulesAreCaught)
{
  RandomSource rng(42);
  int failing = 0;
  for (int attempt = 0; attempt < 400 && failing < 30; ++attempt)
  {
    const RandomRule r = failing_rule_candidate(rng, 2 + rng.below(2), 6);
    if (rule_passes_checks(r))
    {
      continue;
    }
    ++failing;
    EXPECT_TRUE(rule_is_caught(r));
  }
  EXPECT_EQ(failing, 30);
}

TEST(Misreports, StructuredCountAndDeterminism)
{
  const ValuationProfile p = gen_instance({});
  const auto a = structured_misreports(p, 2, 1000, 9);
  const auto b = structured_misreports(p, 2, 1000, 9);
  ASSERT_EQ(a.size(), 1000u);
  ASSERT_EQ(b.size(), 1000u);
  for (std::size_t k = 0; k < a.size(); ++k)
  {
    EXPECT_EQ(a[k].label, b[k].label);
    for (std::size_t mask = 0; mask < 64; mask += 7)
    {
      EXPECT_EQ(a[k].report(WinnerSet(mask)), b[k].report(WinnerSet(mask)));
    }
  }
  EXPECT_EQ(structured_misreports(p, 0, 5, 1).size(), 5u);
}

TEST(Deviation, TruthfulMechanismsHaveNoProfitableMisreports)
{
  RandomSource rng(43);
  for (int trial = 0; trial < 12; ++trial)
  {
    const ValuationProfile p = gen_instance(random_generator_config(2 + rng.below(4), rng));
    DeviationPlan plan;
    plan.misreports = [&](const ValuationProfile &truth, AgentId i) {
      return structured_misreports(truth, i, 200, derive_seed({7, i}));
    };
    const auto prices = candidate_prices(p, 6, 1);
    const auto main = main_mechanism_realizations(p.n(), 0, 0, true);
    const auto fixed = fixed_price_realizations(prices);
    EXPECT_TRUE(deviation_test(main, p, plan).violations.empty()) << "trial " << trial;
    EXPECT_TRUE(deviation_test(fixed, p, plan).violations.empty()) << "trial " << trial;
  }
}

TEST(Deviation, Mechanism2HasNoProfitableMisreports)
{
  RandomSource rng(44);
  for (int trial = 0; trial < 10; ++trial)
  {
    GeneratorConfig g = random_generator_config(2 + rng.below(5), rng);
    g.family = ModelFamily::Additive;
    const ValuationProfile p = gen_instance(g);
    DeviationPlan plan;
    plan.misreports = [&](const ValuationProfile &truth, AgentId i) {
      auto out = structured_misreports(truth, i, 200, derive_seed({8, i}));
      const double t = *private_parameter(truth.agent(i));
      const std::vector<double> values{0.0, 0.5 * t, t + 0.5, 2.0 * t + 1.0, 100.0};
      for (auto &m : parameter_misreports(truth, i, values))
      {
        out.push_back(std::move(m));
      }
      return out;
    };
    const auto realizations = mechanism2_realizations(p, 4.68, 8, 3);
    EXPECT_TRUE(deviation_test(realizations, p, plan).violations.empty()) << "trial " << trial;
  }
}

TEST(Deviation, NegativeControlIsCaught)
{
  GeneratorConfig g;
  g.family = ModelFamily::GraphConcave;
  g.n = 4;
  g.seed = 1;
  const ValuationProfile p = gen_instance(g);
  DeviationPlan plan;
  plan.misreports = [](const ValuationProfile &truth, AgentId i) { return structured_misreports(truth, i, 50, i); };
  const auto realizations = pay_your_bid_realizations(candidate_prices(p, 4, 2));
  const DeviationReport report = deviation_test(realizations, p, plan);
  EXPECT_FALSE(report.violations.empty());
  EXPECT_GT(report.checks, 0u);
  EXPECT_NE(report.violations.front().describe().find("gains"), std::string::npos);
}

TEST(Deviation, RealizationsReplayTheSameRandomness)
{
  const ValuationProfile p = gen_instance({});
  const auto first = mechanism2_realizations(gen_instance([] {
                                               GeneratorConfig g;
                                               g.family = ModelFamily::Additive;
                                               return g;
                                             }()),
                                             2.0, 4, 5);
  (void)p;
  GeneratorConfig g;
  g.family = ModelFamily::Additive;
  const ValuationProfile additive = gen_instance(g);
  for (const Realization &r : first)
  {
    EXPECT_EQ(r(additive), r(additive));
  }
  const auto main = main_mechanism_realizations(6, 5, 11);
  for (const Realization &r : main)
  {
    EXPECT_EQ(r(p), r(p));
  }
}
