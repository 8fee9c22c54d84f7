#include "extauction/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "extauction/random_source.hpp"

namespace extauction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxGenerationAttempts = 100;

Cell integer(std::size_t x) { return static_cast<std::int64_t>(x); }

Cell seed_cell(std::uint64_t seed) { return std::to_string(seed); }

/// Ratio benchmark / revenue, +inf when the revenue is zero. Only meaningful for benchmark > 0.
double ratio(double benchmark, double revenue) { return revenue > 0.0 ? benchmark / revenue : kInf; }

double draw_t(const GeneratorConfig &config, RandomSource &rng)
{
  if (config.integer_t)
  {
    return std::min(config.t_max, std::floor(rng.uniform(config.t_min, config.t_max + 1.0)));
  }
  return rng.uniform(config.t_min, config.t_max);
}

/// values[k] for |S| = k; increasing and concave with values[0] = 0.
std::vector<double> concave_cardinality(std::size_t n, double scale, RandomSource &rng)
{
  std::vector<double> steps(n);
  for (double &d : steps)
  {
    d = rng.uniform01();
  }
  std::sort(steps.begin(), steps.end(), std::greater<>());
  std::vector<double> values(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k)
  {
    values[k] = values[k - 1] + scale * steps[k - 1];
  }
  return values;
}

/// Random entries in [lo, 2 lo] on sets containing i, raised to the maximum over subsets that
/// contain i. Monotone, and subadditive because any two values are within a factor of two.
std::vector<double> monotone_completion(std::size_t n, AgentId i, double lo, RandomSource &rng)
{
  const std::size_t count = std::size_t{1} << n;
  std::vector<double> values(count, 0.0);
  for (std::size_t mask = 0; mask < count; ++mask)
  {
    const WinnerSet s(mask);
    if (!s.contains(i))
    {
      continue;
    }
    double v = rng.uniform(lo, 2.0 * lo);
    for (AgentId j : s)
    {
      if (j != i)
      {
        v = std::max(v, values[s.without(j).mask()]);
      }
    }
    values[mask] = v;
  }
  return values;
}

/// Maximum over a few nonnegative additive clauses, on sets containing i.
std::vector<double> xos_table(std::size_t n, AgentId i, const GeneratorConfig &config, RandomSource &rng)
{
  constexpr std::size_t kClauses = 3;
  std::vector<std::vector<double>> clauses(kClauses, std::vector<double>(n));
  for (auto &clause : clauses)
  {
    for (double &a : clause)
    {
      a = rng.uniform(config.t_min, config.t_max) / static_cast<double>(n);
    }
  }
  const std::size_t count = std::size_t{1} << n;
  std::vector<double> values(count, 0.0);
  for (std::size_t mask = 0; mask < count; ++mask)
  {
    const WinnerSet s(mask);
    if (!s.contains(i))
    {
      continue;
    }
    for (const auto &clause : clauses)
    {
      double total = 0.0;
      for (AgentId j : s)
      {
        total += clause[j];
      }
      values[mask] = std::max(values[mask], total);
    }
  }
  return values;
}

SetWeight random_weight(const GeneratorConfig &config, AgentId i, double scale, RandomSource &rng)
{
  if (config.table_weights && config.n <= kMaxTableAgents)
  {
    return SetWeight::table(monotone_completion(config.n, i, scale * rng.uniform(0.5, 1.0), rng));
  }
  return SetWeight::cardinality(concave_cardinality(config.n, scale, rng));
}

AgentModel random_agent(const GeneratorConfig &config, AgentId i, const std::vector<WinnerSet> &graph,
                        RandomSource &rng)
{
  const double mid = 0.5 * (config.t_min + config.t_max);
  switch (config.family)
  {
  case ModelFamily::Table:
    if (config.table_sampler == TableSampler::Xos)
    {
      return TableValuation{xos_table(config.n, i, config, rng)};
    }
    return TableValuation{monotone_completion(config.n, i, std::max(draw_t(config, rng), 1e-3), rng)};
  case ModelFamily::Additive: {
    const double t = draw_t(config, rng);
    return AdditiveValuation{t, random_weight(config, i, mid, rng)};
  }
  case ModelFamily::Scalar: {
    const double t = draw_t(config, rng);
    return ScalarValuation{t, random_weight(config, i, 1.0, rng)};
  }
  case ModelFamily::Linear: {
    const double t = draw_t(config, rng);
    SetWeight w = random_weight(config, i, 1.0, rng);
    return LinearValuation{t, std::move(w), random_weight(config, i, mid, rng)};
  }
  case ModelFamily::GraphConcave:
    return GraphConcaveValuation{draw_t(config, rng), config.beta, config.shape, graph[i]};
  }
  throw std::logic_error("unknown model family");
}

void validate_config(const GeneratorConfig &config)
{
  if (config.n == 0)
  {
    throw std::invalid_argument("cannot generate an empty market");
  }
  if (config.n > kMaxAgents)
  {
    throw std::invalid_argument("markets are limited to 64 agents");
  }
  if (config.family == ModelFamily::Table && config.n > kMaxTableAgents)
  {
    throw std::invalid_argument("table instances are limited to n <= 10");
  }
  if (!(config.t_min >= 0.0) || !(config.t_max >= config.t_min) || !std::isfinite(config.t_max))
  {
    throw std::invalid_argument("need 0 <= t_min <= t_max < inf");
  }
  if (!(config.edge_probability >= 0.0 && config.edge_probability <= 1.0))
  {
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  }
  if (!(config.beta >= 0.0) || !std::isfinite(config.beta))
  {
    throw std::invalid_argument("beta must be a finite nonnegative number");
  }
}

/// Profile whose bids for agent i are the private values t_i only.
class PrivateValueBids final : public BidOracle
{
public:
  explicit PrivateValueBids(std::vector<double> t) : t_(std::move(t)) {}

  std::size_t agent_count() const override { return t_.size(); }
  double bid(AgentId i, WinnerSet s) const override { return s.contains(i) ? t_[i] : 0.0; }

private:
  std::vector<double> t_;
};

BenchmarkResult benchmark(const BidOracle &bids, std::size_t k)
{
  return bids.agent_count() <= kMaxBruteForceAgents ? benchmark_bruteforce(bids, k) : benchmark_sweep(bids, k);
}

std::string rational_string(const Rational &x)
{
  std::ostringstream out;
  out << numerator(x) << "/" << denominator(x);
  return out.str();
}

}  // namespace

std::string family_name(ModelFamily family)
{
  switch (family)
  {
  case ModelFamily::Table:
    return "table";
  case ModelFamily::Additive:
    return "additive";
  case ModelFamily::Scalar:
    return "scalar";
  case ModelFamily::Linear:
    return "linear";
  case ModelFamily::GraphConcave:
    return "graph_concave";
  }
  return "unknown";
}

ModelFamily parse_family(const std::string &name)
{
  for (ModelFamily f : {ModelFamily::Table, ModelFamily::Additive, ModelFamily::Scalar, ModelFamily::Linear,
                        ModelFamily::GraphConcave})
  {
    if (family_name(f) == name)
    {
      return f;
    }
  }
  throw std::invalid_argument("unknown model family '" + name + "'");
}

std::vector<WinnerSet> generate_graph(std::size_t n, GraphKind kind, double edge_probability,
                                      std::size_t attachment_edges, RandomSource &rng)
{
  std::vector<WinnerSet> adj(n);
  auto connect = [&adj](AgentId a, AgentId b) {
    adj[a].insert(b);
    adj[b].insert(a);
  };
  if (kind == GraphKind::ErdosRenyi)
  {
    for (AgentId a = 0; a < n; ++a)
    {
      for (AgentId b = a + 1; b < n; ++b)
      {
        if (rng.bernoulli(edge_probability))
        {
          connect(a, b);
        }
      }
    }
    return adj;
  }

  // seed clique, then each newcomer links to distinct nodes chosen with weight degree + 1
  const std::size_t m = std::max<std::size_t>(attachment_edges, 1);
  const std::size_t core = std::min(n, m + 1);
  for (AgentId a = 0; a < core; ++a)
  {
    for (AgentId b = a + 1; b < core; ++b)
    {
      connect(a, b);
    }
  }
  for (AgentId v = core; v < n; ++v)
  {
    WinnerSet chosen;
    while (chosen.size() < std::min(m, v))
    {
      double total = 0.0;
      for (AgentId u = 0; u < v; ++u)
      {
        total += chosen.contains(u) ? 0.0 : static_cast<double>(adj[u].size() + 1);
      }
      double x = rng.uniform(0.0, total);
      AgentId pick = v;
      for (AgentId u = 0; u < v; ++u)
      {
        if (chosen.contains(u))
        {
          continue;
        }
        pick = u;
        x -= static_cast<double>(adj[u].size() + 1);
        if (x < 0.0)
        {
          break;
        }
      }
      chosen.insert(pick);
    }
    for (AgentId u : chosen)
    {
      connect(u, v);
    }
  }
  return adj;
}

ValuationProfile gen_instance(const GeneratorConfig &config)
{
  validate_config(config);
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt)
  {
    RandomSource rng(derive_seed({config.seed, static_cast<std::uint64_t>(attempt)}));
    std::vector<WinnerSet> graph;
    if (config.family == ModelFamily::GraphConcave)
    {
      graph = generate_graph(config.n, config.graph, config.edge_probability, config.attachment_edges, rng);
    }
    std::vector<AgentModel> agents;
    agents.reserve(config.n);
    for (AgentId i = 0; i < config.n; ++i)
    {
      agents.push_back(random_agent(config, i, graph, rng));
    }
    ValuationProfile profile(std::move(agents));
    CheckOptions options = default_check_options(config.n);
    options.seed = derive_seed({config.seed, static_cast<std::uint64_t>(attempt), 1});
    options.max_violations = 1;
    if (check_conditions(profile, options).empty())
    {
      return profile;
    }
  }
  throw std::runtime_error("no valid instance after 100 attempts; the parameters may be unsatisfiable");
}

ValuationProfile theorem3_instance(double m, double x)
{
  if (!(m >= 1.0) || !(x >= 0.0))
  {
    throw std::invalid_argument("need M >= 1 and x >= 0");
  }
  const SetWeight w = SetWeight::cardinality({0.0, 1.0, m});
  return ValuationProfile({ScalarValuation{x, w}, ScalarValuation{x, w}});
}

std::vector<SuiteInstance> build_suite(const SuiteConfig &config)
{
  if (config.families.empty() || config.n_min == 0 || config.n_max < config.n_min)
  {
    throw std::invalid_argument("suite needs families and 1 <= n_min <= n_max");
  }
  const std::size_t f = config.families.size();
  const std::size_t sizes = config.n_max - config.n_min + 1;
  std::vector<SuiteInstance> out;
  out.reserve(config.count);
  for (std::size_t k = 0; k < config.count; ++k)
  {
    const std::size_t round = k / f;
    GeneratorConfig g;
    g.family = config.families[k % f];
    g.n = config.n_min + round % sizes;
    g.seed = derive_seed({config.seed, k});
    g.graph = round % 2 == 0 ? GraphKind::ErdosRenyi : GraphKind::PreferentialAttachment;
    g.edge_probability = 0.2 + 0.15 * static_cast<double>(round % 5);
    g.attachment_edges = 1 + round % 3;
    g.beta = 0.5 * static_cast<double>(1 + round % 4);
    g.shape = static_cast<ConcaveShape>(round % 3);
    g.table_sampler = (round / sizes) % 2 == 0 ? TableSampler::Monotone : TableSampler::Xos;
    g.table_weights = (round / sizes) % 2 == 1;
    g.integer_t = round % 4 == 3;
    if (g.integer_t)
    {
      g.t_min = 0.0;
      g.t_max = 4.0;
    }
    char id[32];
    std::snprintf(id, sizeof id, "i%03zu", k);
    out.push_back({id, g.family, g.seed, gen_instance(g)});
  }
  return out;
}

Lemma2Result lemma2_check(const BidOracle &bids, const Partition3 &partition, const BenchmarkResult &optimum)
{
  Lemma2Result out;
  if (!(optimum.value > 0.0))
  {
    out.skipped = true;
    return out;
  }
  out.r = cost_share_target(bids, partition).target();
  out.r_benchmark = static_cast<double>((optimum.set & partition.c()).size()) * optimum.price;
  out.passed = out.r >= out.r_benchmark / 4.0 - kTolerance;
  return out;
}

Lemma2Result lemma2_check(const BidOracle &bids, const Partition3 &partition)
{
  return lemma2_check(bids, partition, benchmark_bruteforce(bids, 3));
}

Lemma2Summary lemma2_exhaustive(const BidOracle &bids)
{
  const std::size_t n = bids.agent_count();
  if (n > kMaxExactExpectationAgents)
  {
    throw std::invalid_argument("exhaustive lemma check supports n <= 10");
  }
  Lemma2Summary out;
  const BenchmarkResult optimum = benchmark_bruteforce(bids, 3);
  if (!(optimum.value > 0.0))
  {
    out.skipped = true;
    return out;
  }
  out.tightest = kInf;
  const std::uint64_t count = partition_count(n);
  for (std::uint64_t index = 0; index < count; ++index)
  {
    const Lemma2Result r = lemma2_check(bids, Partition3::from_index(n, index), optimum);
    ++out.partitions;
    if (!r.passed)
    {
      ++out.failures;
    }
    if (r.r_benchmark > 0.0)
    {
      out.tightest = std::min(out.tightest, r.r / (r.r_benchmark / 4.0));
    }
  }
  return out;
}

TailCheck chernoff_tail_check(unsigned m)
{
  TailCheck out;
  out.probability = binomial_tail_below_ninth(m);
  out.below_ninth = out.probability < Rational(1, 9);
  return out;
}

ExperimentReport theorem2_suite(const std::vector<SuiteInstance> &suite, std::uint64_t seed)
{
  ExperimentReport report;
  report.name = "theorem2";
  report.seed = seed;
  report.columns = {"instance", "family", "n",     "seed",  "f1",          "f2",  "f3",
                    "expected_revenue",   "bound", "ratio", "max_queries", "pass"};
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  double worst = 0.0;
  double ratio_sum = 0.0;
  std::size_t finite = 0;
  for (const SuiteInstance &inst : suite)
  {
    const ValuationProfile &p = inst.profile;
    const std::size_t n = p.n();
    if (n > kMaxExactExpectationAgents)
    {
      ++skipped;
      continue;
    }
    const double f3 = benchmark_bruteforce(p, 3).value;
    // same summation order as main_mechanism_exact_expectation, so the value is identical
    const std::uint64_t count = partition_count(n);
    double total = 0.0;
    std::size_t max_queries = 0;
    for (std::uint64_t index = 0; index < count; ++index)
    {
      const Outcome o = main_mechanism(p, Partition3::from_index(n, index));
      total += o.revenue;
      max_queries = std::max(max_queries, o.queries_used);
    }
    const double expected = total / static_cast<double>(count);
    const double bound = f3 / 324.0;
    const bool pass = expected >= bound - kTolerance;
    Cell ratio_cell = std::string();
    if (f3 > 0.0)
    {
      const double r = ratio(f3, expected);
      ratio_cell = r;
      worst = std::max(worst, r);
      if (std::isfinite(r))
      {
        ratio_sum += r;
        ++finite;
      }
    }
    ++evaluated;
    violations += pass ? 0 : 1;
    report.add_row({inst.id, family_name(inst.family), integer(n), seed_cell(inst.seed), benchmark_bruteforce(p, 1).value,
                    benchmark_bruteforce(p, 2).value, f3, expected, bound, ratio_cell, integer(max_queries), pass});
  }
  report.set_summary("instances", integer(evaluated));
  report.set_summary("skipped", integer(skipped));
  report.set_summary("violations", integer(violations));
  report.set_summary("worst_ratio", worst);
  report.set_summary("mean_ratio", finite ? ratio_sum / static_cast<double>(finite) : 0.0);
  report.set_summary("guaranteed_ratio", 324.0);
  return report;
}

ExperimentReport lemma2_suite(const std::vector<SuiteInstance> &suite, std::uint64_t seed)
{
  ExperimentReport report;
  report.name = "lemma2";
  report.seed = seed;
  report.columns = {"instance", "family", "n", "seed", "f3", "partitions", "failures", "tightest", "pass"};
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::uint64_t failures = 0;
  double tightest = kInf;
  for (const SuiteInstance &inst : suite)
  {
    if (inst.profile.n() > kMaxExactExpectationAgents)
    {
      ++skipped;
      continue;
    }
    const Lemma2Summary s = lemma2_exhaustive(inst.profile);
    if (s.skipped)
    {
      ++skipped;
      continue;
    }
    ++checked;
    failures += s.failures;
    tightest = std::min(tightest, s.tightest);
    report.add_row({inst.id, family_name(inst.family), integer(inst.profile.n()), seed_cell(inst.seed),
                    benchmark_bruteforce(inst.profile, 3).value, static_cast<std::int64_t>(s.partitions),
                    static_cast<std::int64_t>(s.failures), s.tightest, s.failures == 0});
  }
  report.set_summary("instances", integer(checked));
  report.set_summary("skipped", integer(skipped));
  report.set_summary("failures", static_cast<std::int64_t>(failures));
  report.set_summary("tightest", tightest);
  return report;
}

ExperimentReport partition_bounds_table(unsigned m_min, unsigned m_max)
{
  if (m_min < 1 || m_max < m_min || m_max > kMaxPartitionItems)
  {
    throw std::invalid_argument("need 1 <= m_min <= m_max <= 200");
  }
  ExperimentReport report;
  report.name = "partition_bounds";
  report.columns = {"m",    "min_expectation", "min_expectation_exact", "per_item", "lower_bound", "meets_bound",
                    "tail", "tail_exact",      "tail_below_ninth"};
  std::size_t bound_violations = 0;
  std::size_t tail_violations = 0;
  Rational best_per_item(1);
  unsigned best_m = 0;
  for (unsigned m = m_min; m <= m_max; ++m)
  {
    const Rational e = partition_min_expectation(m);
    const Rational lower(2 * m, 27);
    const bool meets = m < 3 || e >= lower;
    const TailCheck tail = chernoff_tail_check(m);
    const bool tail_ok = m < 17 || tail.below_ninth;
    bound_violations += meets ? 0 : 1;
    tail_violations += tail_ok ? 0 : 1;
    const Rational per_item = e / m;
    if (m >= 3 && (best_m == 0 || per_item < best_per_item))
    {
      best_per_item = per_item;
      best_m = m;
    }
    report.add_row({static_cast<std::int64_t>(m), to_double(e), rational_string(e), to_double(per_item),
                    to_double(lower), meets, to_double(tail.probability), rational_string(tail.probability),
                    tail.below_ninth});
  }
  report.set_summary("bound_violations", integer(bound_violations));
  report.set_summary("tail_violations", integer(tail_violations));
  if (best_m != 0)
  {
    report.set_summary("min_per_item_m", static_cast<std::int64_t>(best_m));
    report.set_summary("min_per_item", rational_string(best_per_item));
  }
  return report;
}

Mechanism2Bound mechanism2_bound_check(const ValuationProfile &profile)
{
  const std::size_t n = profile.n();
  if (!profile.all_additive())
  {
    throw std::invalid_argument("the decomposition bound needs additive valuations");
  }
  Mechanism2Bound out;
  const WinnerSet everyone = WinnerSet::all(n);
  std::vector<double> t(n);
  for (AgentId i = 0; i < n; ++i)
  {
    const auto &m = std::get<AdditiveValuation>(profile.agent(i));
    t[i] = m.t;
    out.sum_values += profile.value(i, everyone);
    out.sum_weights += m.w(i, everyone);
  }
  out.f2 = benchmark(profile, 2).value;
  out.f2_tilde = benchmark(PrivateValueBids(t), 2).value;
  out.passed = out.f2 <= 2.0 * out.f2_tilde + 2.0 * out.sum_values + kTolerance;
  return out;
}

Mechanism2OracleCheck mechanism2_oracle_check(const ValuationProfile &profile)
{
  Mechanism2OracleCheck out;
  out.f2 = benchmark(profile, 2).value;
  out.expected_revenue = mechanism2_exact_expectation(profile, 1.0, OptimalPriceOracle(2));
  out.passed = out.expected_revenue >= out.f2 / 4.0 - kTolerance;
  return out;
}

ExperimentReport mechanism2_suite(const std::vector<SuiteInstance> &suite, std::uint64_t seed, double alpha)
{
  ExperimentReport report;
  report.name = "mechanism2";
  report.seed = seed;
  report.columns = {"instance",   "n",          "seed",           "f2",         "f2_tilde",
                    "sum_values", "sum_weights", "bound_pass",    "oracle_revenue", "oracle_pass",
                    "rsop_revenue", "rsop_ratio"};
  std::size_t checked = 0;
  std::size_t bound_failures = 0;
  std::size_t oracle_failures = 0;
  const Rsop rsop;
  for (const SuiteInstance &inst : suite)
  {
    if (!inst.profile.all_additive() || inst.profile.n() < 2)
    {
      continue;
    }
    const Mechanism2Bound bound = mechanism2_bound_check(inst.profile);
    const Mechanism2OracleCheck oracle = mechanism2_oracle_check(inst.profile);
    const double rsop_revenue = mechanism2_exact_expectation(inst.profile, alpha, rsop);
    ++checked;
    bound_failures += bound.passed ? 0 : 1;
    oracle_failures += oracle.passed ? 0 : 1;
    Cell rsop_ratio = std::string();
    if (bound.f2 > 0.0)
    {
      rsop_ratio = ratio(bound.f2, rsop_revenue);
    }
    report.add_row({inst.id, integer(inst.profile.n()), seed_cell(inst.seed), bound.f2, bound.f2_tilde,
                    bound.sum_values, bound.sum_weights, bound.passed, oracle.expected_revenue, oracle.passed,
                    rsop_revenue, rsop_ratio});
  }
  report.set_summary("instances", integer(checked));
  report.set_summary("alpha", alpha);
  report.set_summary("bound_failures", integer(bound_failures));
  report.set_summary("oracle_failures", integer(oracle_failures));
  return report;
}

ExperimentReport f2_impossibility_demo(const std::vector<double> &ms)
{
  ExperimentReport report;
  report.name = "f2_demo";
  report.columns = {"M",     "f2", "f3", "main_expected_revenue", "ratio", "fixed_price_x_revenue",
                    "fixed_price_mx_revenue"};
  bool nondecreasing = true;
  bool exceeds = true;
  double previous = -kInf;
  for (double m : ms)
  {
    const ValuationProfile p = theorem3_instance(m, 1.0);
    const double f2 = benchmark_bruteforce(p, 2).value;
    const double f3 = benchmark_bruteforce(p, 3).value;
    const double expected = main_mechanism_exact_expectation(p);
    const double r = ratio(f2, expected);
    nondecreasing = nondecreasing && r >= previous;
    exceeds = exceeds && r > m / 10.0;
    previous = r;
    report.add_row({m, f2, f3, expected, r, fixed_price_mechanism(p, 1.0).revenue,
                    fixed_price_mechanism(p, m).revenue});
  }
  report.set_summary("ratio_nondecreasing", nondecreasing);
  report.set_summary("ratio_exceeds_m_over_10", exceeds);
  report.set_summary("note", std::string("fixed_price_mx_revenue needs the price M x in advance; reference only"));
  return report;
}

LosingValueDemo losing_value_demo(std::size_t n, double t)
{
  if (n == 0 || n > kMaxTableAgents || !(t > 0.0))
  {
    throw std::invalid_argument("losing value demo needs 1 <= n <= 10 and t > 0");
  }
  const std::size_t count = std::size_t{1} << n;
  std::vector<AgentModel> invalid;
  std::vector<AgentModel> valid;
  for (AgentId i = 0; i < n; ++i)
  {
    std::vector<double> everywhere(count);
    std::vector<double> truncated(count);
    for (std::size_t mask = 0; mask < count; ++mask)
    {
      const WinnerSet s(mask);
      everywhere[mask] = t * static_cast<double>(s.size());
      truncated[mask] = s.contains(i) ? everywhere[mask] : 0.0;
    }
    invalid.push_back(TableValuation{std::move(everywhere)});
    valid.push_back(TableValuation{std::move(truncated)});
  }
  LosingValueDemo out{ValuationProfile(std::move(invalid)), ValuationProfile(std::move(valid)), {}, {}, {}};
  out.invalid_violations = check_conditions(out.invalid);
  out.valid_violations = check_conditions(out.valid);
  std::ostringstream text;
  text << "Valuations v_i(t, S) = t * |S| that stay positive when agent i loses break the zero-when-losing "
          "condition. With such valuations there is no universally truthful competitive mechanism, so "
          "profiles like this are rejected before any mechanism runs.\n"
       << "untruncated profile: " << out.invalid_violations.size() << " violation(s)";
  if (!out.invalid_violations.empty())
  {
    text << ", first: " << out.invalid_violations.front().describe();
  }
  text << "\ntruncated profile (zero when losing): " << out.valid_violations.size() << " violation(s)\n";
  out.narrative = text.str();
  return out;
}

MonteCarloEstimate main_mechanism_monte_carlo(const BidOracle &bids, std::size_t trials, std::uint64_t seed)
{
  MonteCarloEstimate out;
  out.trials = trials;
  if (trials == 0)
  {
    return out;
  }
  // Welford's running mean and variance
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < trials; ++k)
  {
    RandomSource rng(derive_seed({seed, static_cast<std::uint64_t>(k)}));
    const Outcome o = main_mechanism(bids, rng);
    out.max_queries = std::max(out.max_queries, o.queries_used);
    const double delta = o.revenue - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (o.revenue - mean);
  }
  out.mean = mean;
  out.standard_error = trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1) / static_cast<double>(trials)) : 0.0;
  return out;
}

ExperimentReport ratio_campaign(const CampaignConfig &config)
{
  ExperimentReport report;
  report.name = "ratio_campaign";
  report.seed = config.seed;
  report.columns = {"instance", "n",        "seed",  "trials",      "f3",           "mean_revenue", "standard_error",
                    "ci_low",   "ci_high",  "ratio", "max_queries", "query_budget", "within_budget"};
  if (config.trials == 0)
  {
    return report;
  }
  std::size_t budget_violations = 0;
  double min_ratio = kInf;
  double ratio_sum = 0.0;
  std::size_t finite = 0;
  for (std::size_t n : config.sizes)
  {
    for (std::size_t j = 0; j < config.instances_per_size; ++j)
    {
      GeneratorConfig g;
      g.family = config.family;
      g.n = n;
      g.graph = config.graph;
      g.edge_probability = config.edge_probability;
      g.seed = derive_seed({config.seed, n, j});
      const ValuationProfile p = gen_instance(g);
      const double f3 = benchmark_sweep(p, 3).value;
      const MonteCarloEstimate mc = main_mechanism_monte_carlo(p, config.trials, derive_seed({g.seed, 1}));
      const std::size_t budget = main_mechanism_query_budget(n);
      const bool within = mc.max_queries <= budget;
      budget_violations += within ? 0 : 1;
      Cell ratio_cell = std::string();
      if (f3 > 0.0)
      {
        const double r = ratio(f3, mc.mean);
        ratio_cell = r;
        min_ratio = std::min(min_ratio, r);
        if (std::isfinite(r))
        {
          ratio_sum += r;
          ++finite;
        }
      }
      char id[48];
      std::snprintf(id, sizeof id, "n%zu-%zu", n, j);
      report.add_row({std::string(id), integer(n), seed_cell(g.seed), integer(mc.trials), f3, mc.mean,
                      mc.standard_error, mc.mean - 1.96 * mc.standard_error, mc.mean + 1.96 * mc.standard_error,
                      ratio_cell, integer(mc.max_queries), integer(budget), within});
    }
  }
  report.set_summary("instances", integer(report.rows.size()));
  report.set_summary("min_ratio", min_ratio);
  report.set_summary("mean_ratio", finite ? ratio_sum / static_cast<double>(finite) : 0.0);
  report.set_summary("budget_violations", integer(budget_violations));
  return report;
}

std::vector<ExperimentReport> run_experiments(const ExperimentConfig &config)
{
  std::vector<ExperimentReport> out;
  std::vector<SuiteInstance> suite;
  if (config.theorem2 || config.lemma2 || config.mechanism2)
  {
    suite = build_suite(config.suite);
  }
  if (config.theorem2)
  {
    out.push_back(theorem2_suite(suite, config.seed));
  }
  if (config.lemma2)
  {
    out.push_back(lemma2_suite(suite, config.seed));
  }
  if (config.lemma3)
  {
    ExperimentReport table = partition_bounds_table(1, config.lemma3_max_m);
    table.seed = config.seed;
    out.push_back(std::move(table));
  }
  if (config.mechanism2)
  {
    out.push_back(mechanism2_suite(suite, config.seed, config.alpha));
  }
  if (!config.m_values.empty())
  {
    ExperimentReport demo = f2_impossibility_demo(config.m_values);
    demo.seed = config.seed;
    out.push_back(std::move(demo));
  }
  if (config.campaign)
  {
    out.push_back(ratio_campaign(*config.campaign));
  }
  return out;
}

}  // namespace extauction
