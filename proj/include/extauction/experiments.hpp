#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "extauction/benchmark.hpp"
#include "extauction/exact_probability.hpp"
#include "extauction/mechanisms.hpp"
#include "extauction/report.hpp"
#include "extauction/valuations.hpp"

namespace extauction {

// ---------------------------------------------------------------------------
// Instance generation
// ---------------------------------------------------------------------------

enum class ModelFamily
{
  Table,
  Additive,
  Scalar,
  Linear,
  GraphConcave,
};

std::string family_name(ModelFamily family);
ModelFamily parse_family(const std::string &name);

enum class GraphKind
{
  ErdosRenyi,
  PreferentialAttachment,
};

enum class TableSampler
{
  Monotone,  ///< random values in [lo, 2 lo], closed upward under inclusion
  Xos,       ///< maximum over a few nonnegative additive clauses
};

/// Parameters for one generated market. All distributions are our own choices.
struct GeneratorConfig
{
  ModelFamily family = ModelFamily::GraphConcave;
  std::size_t n = 6;
  std::uint64_t seed = 0;
  double t_min = 1.0;  ///< private parameters ~ U[t_min, t_max]
  double t_max = 10.0;
  GraphKind graph = GraphKind::ErdosRenyi;
  double edge_probability = 0.5;
  std::size_t attachment_edges = 2;
  double beta = 1.0;
  ConcaveShape shape = ConcaveShape::Sqrt;
  TableSampler table_sampler = TableSampler::Monotone;
  /// Use table (rather than cardinality) public weights where n allows.
  bool table_weights = false;
  /// Round private parameters down to integers, which makes benchmark ties common.
  bool integer_t = false;
};

/// Generates a profile satisfying the valuation conditions, retrying up to 100 times.
/// Throws std::invalid_argument for n == 0 or unsatisfiable parameters.
ValuationProfile gen_instance(const GeneratorConfig &config);

/// Undirected graph as neighbor masks.
std::vector<WinnerSet> generate_graph(std::size_t n, GraphKind kind, double edge_probability,
                                      std::size_t attachment_edges, RandomSource &rng);

/// Two agents with v_i({i}) = x and v_i({0,1}) = M x (scalar valuations with cardinality weights).
ValuationProfile theorem3_instance(double m, double x = 1.0);

// ---------------------------------------------------------------------------
// Instance suites
// ---------------------------------------------------------------------------

struct SuiteInstance
{
  std::string id;
  ModelFamily family;
  std::uint64_t seed;
  ValuationProfile profile;
};

struct SuiteConfig
{
  std::size_t count = 200;
  std::size_t n_min = 3;
  std::size_t n_max = 9;
  std::vector<ModelFamily> families = {ModelFamily::Table, ModelFamily::Additive, ModelFamily::Scalar,
                                       ModelFamily::GraphConcave};
  std::uint64_t seed = 1;
};

/// Round-robin over families and sizes; each instance gets its own derived seed and varied
/// generator settings (graph kind, shapes, samplers, weight kinds).
std::vector<SuiteInstance> build_suite(const SuiteConfig &config);

// ---------------------------------------------------------------------------
// Revenue lemmas
// ---------------------------------------------------------------------------

struct Lemma2Result
{
  bool skipped = false;  ///< F^(3) is zero
  bool passed = true;
  double r = 0.0;            ///< max(r_A(C), r_B(C))
  double r_benchmark = 0.0;  ///< |S* ∩ C| * p* for the canonical F^(3) optimum
};

/// Checks r(C) >= r_F(C)/4 for one partition against a fixed canonical optimum.
Lemma2Result lemma2_check(const BidOracle &bids, const Partition3 &partition, const BenchmarkResult &optimum);

/// Same, computing the canonical F^(3) optimum by brute force.
Lemma2Result lemma2_check(const BidOracle &bids, const Partition3 &partition);

struct Lemma2Summary
{
  bool skipped = false;
  std::uint64_t partitions = 0;
  std::uint64_t failures = 0;
  /// min over partitions with r_F(C) > 0 of r(C) / (r_F(C)/4); +inf if there are none
  double tightest = 0.0;
};

/// lemma2_check over all 3^n partitions (n <= 10).
Lemma2Summary lemma2_exhaustive(const BidOracle &bids);

struct TailCheck
{
  Rational probability;
  bool below_ninth = false;
};

/// Exact Pr(a <= m/9) for a ~ Binomial(m, 1/3) and whether it is below 1/9.
TailCheck chernoff_tail_check(unsigned m);

// ---------------------------------------------------------------------------
// Revenue guarantee, Mechanism-2, demos
// ---------------------------------------------------------------------------

/// Exact expected revenue of the main mechanism against F^(3)/324 for every instance.
/// Columns: instance, family, n, seed, f1, f2, f3, expected_revenue, bound, ratio, pass.
/// ratio is f3 / expected_revenue (inf if revenue is zero, empty when f3 is zero).
ExperimentReport theorem2_suite(const std::vector<SuiteInstance> &suite, std::uint64_t seed);

/// lemma2_exhaustive on every instance: r(C) >= r_F(C)/4 over all 3^n partitions.
ExperimentReport lemma2_suite(const std::vector<SuiteInstance> &suite, std::uint64_t seed);

/// Exact E[min(a, b, c)] against 2m/27 and Pr(a <= m/9) against 1/9 for m in [m_min, m_max].
ExperimentReport partition_bounds_table(unsigned m_min, unsigned m_max);

struct Mechanism2Bound
{
  double f2 = 0.0;        ///< F^(2) of the additive valuations
  double f2_tilde = 0.0;  ///< F^(2) of the private values alone
  double sum_values = 0.0;   ///< sum_i v_i([n])
  double sum_weights = 0.0;  ///< sum_i w_i([n])
  bool passed = false;       ///< F^(2) <= 2 F~^(2) + 2 sum_i v_i([n])
};

/// Decomposition bound behind Mechanism-2's guarantee. Requires an additive profile.
Mechanism2Bound mechanism2_bound_check(const ValuationProfile &profile);

struct Mechanism2OracleCheck
{
  double f2 = 0.0;
  double expected_revenue = 0.0;  ///< exact, alpha = 1, plug-in = OptimalPriceOracle(2)
  bool passed = false;            ///< expected_revenue >= F^(2)/4
};

Mechanism2OracleCheck mechanism2_oracle_check(const ValuationProfile &profile);

/// Both Mechanism-2 checks over the additive instances of the suite, plus the exact expected
/// revenue with RSOP as the plug-in at the given alpha.
ExperimentReport mechanism2_suite(const std::vector<SuiteInstance> &suite, std::uint64_t seed,
                                  double alpha = kDefaultAlpha);

/// Two-agent instance family against F^(2): per M, F^(2) = 2M, the main mechanism's exact
/// expected revenue (9 partitions) and fixed-price revenues at x and at the benchmark price
/// M x (the latter needs the price in advance and is a reference row only).
ExperimentReport f2_impossibility_demo(const std::vector<double> &ms);

struct LosingValueDemo
{
  ValuationProfile invalid;  ///< v_i(S) = t |S| even when i is not in S
  ValuationProfile valid;    ///< the same values, zero when losing
  std::vector<ConditionViolation> invalid_violations;
  std::vector<ConditionViolation> valid_violations;
  std::string narrative;
};

LosingValueDemo losing_value_demo(std::size_t n = 3, double t = 1.0);

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

struct MonteCarloEstimate
{
  std::size_t trials = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t max_queries = 0;
};

/// Mean revenue of the main mechanism over `trials` independent partitions; trial k uses the
/// seed derive_seed({seed, k}).
MonteCarloEstimate main_mechanism_monte_carlo(const BidOracle &bids, std::size_t trials, std::uint64_t seed);

/// Query budget for one run of the main mechanism.
inline std::size_t main_mechanism_query_budget(std::size_t n) { return 10 * n * n; }

struct CampaignConfig
{
  std::vector<std::size_t> sizes = {30};
  std::size_t instances_per_size = 3;
  std::size_t trials = 10000;
  ModelFamily family = ModelFamily::GraphConcave;
  GraphKind graph = GraphKind::ErdosRenyi;
  double edge_probability = 0.5;
  std::uint64_t seed = 1;
};

/// Monte Carlo revenue of the main mechanism vs F^(3) (sweep) on generated instances.
/// Columns: instance, n, seed, trials, f3, mean_revenue, standard_error, ci_low, ci_high, ratio,
/// max_queries, query_budget, within_budget.
ExperimentReport ratio_campaign(const CampaignConfig &config);

/// Everything `experiment` runs, as read from a config file.
struct ExperimentConfig
{
  std::uint64_t seed = 1;
  SuiteConfig suite;
  bool theorem2 = true;
  bool lemma2 = true;
  bool lemma3 = true;
  unsigned lemma3_max_m = 200;
  bool mechanism2 = true;
  double alpha = kDefaultAlpha;
  std::vector<double> m_values = {1, 10, 100, 1000, 10000};
  std::optional<CampaignConfig> campaign;
};

std::vector<ExperimentReport> run_experiments(const ExperimentConfig &config);

}  // namespace extauction
