#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "extauction/mechanisms.hpp"
#include "extauction/valuations.hpp"
#include "extauction/winner_set.hpp"

namespace extauction {

/// Default number of grid points per agent.
inline constexpr std::size_t kDefaultGridSize = 64;

/// `count` evenly spaced values from lo to hi inclusive.
std::vector<double> even_grid(double lo, double hi, std::size_t count);

/// Deterministic allocation rule over finite per-agent bid grids.
struct SingleParamRule
{
  std::vector<std::vector<double>> grids;  ///< sorted ascending, one per agent
  std::function<WinnerSet(std::span<const double>)> allocation;

  std::size_t agent_count() const { return grids.size(); }
};

/// Sells to every agent bidding at least `price`.
SingleParamRule threshold_rule(std::vector<std::vector<double>> grids, double price);

/// Calls `visit` with every bid vector whose entry for `agent` is a placeholder, i.e. every
/// context b_{-i} on the grid product. The placeholder is grids[agent].front().
void for_each_context(const SingleParamRule &rule, AgentId agent,
                      const std::function<void(std::vector<double> &)> &visit);

/// Pair of own bids (low < high, same context) at which a rule condition fails.
struct RuleViolation
{
  AgentId agent;
  std::vector<double> context;  ///< full bid vector; the agent's own entry is irrelevant
  double low_bid;
  double high_bid;
  WinnerSet low_set;
  WinnerSet high_set;

  std::string describe() const;
};

/// Winning must survive raising one's own bid: i ∈ A(b_{-i}, b) implies i ∈ A(b_{-i}, b') for b' >= b.
std::vector<RuleViolation> check_bid_independent_monotone(const SingleParamRule &rule, AgentId agent);

/// Order of two sets for agent i under a single-parameter model, decided by how
/// g(t) = v_i(t, s1) - v_i(t, s2) moves between t = lo and t = hi:
/// +1 if it increases, -1 if it decreases, 0 if constant (same equivalence class).
int compare_sets(const AgentModel &model, AgentId agent, WinnerSet s1, WinnerSet s2, double lo, double hi);

/// Raising one's own bid must not move the allocation to a lower class: for linear models,
/// w_i(A(b_{-i}, b')) >= w_i(A(b_{-i}, b)) for b' >= b.
std::vector<RuleViolation> check_encourages_higher_bids(const SingleParamRule &rule, AgentId agent,
                                                        const AgentModel &model);

/// Thrown when payments are requested for a rule that cannot be truthfully implemented.
class RuleRejected : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// A maximal run of consecutive grid points whose allocations are equivalent for the agent.
struct BidInterval
{
  std::size_t first;  ///< grid index, inclusive
  std::size_t last;   ///< grid index, inclusive
};

/// The agent's bid axis for one context, cut into equivalence-class intervals I_0..I_s.
struct BreakpointPartition
{
  AgentId agent = 0;
  std::vector<double> grid;              ///< the agent's bid grid
  std::vector<WinnerSet> allocation;     ///< A(b_{-i}, x) at every grid point x
  std::vector<BidInterval> intervals;
  std::vector<std::size_t> interval_of;  ///< grid index -> interval index
  /// d_j = inf_{x in I_{j+1}} v(x, S_j) - inf_{x in I_j} v(x, S_j), with S_j any set of class j.
  std::vector<double> d;
};

/// Scans the agent's grid for a fixed context and builds the interval partition and d_j.
/// Throws RuleRejected if either characterization condition fails in this context.
BreakpointPartition discover_breakpoints(const SingleParamRule &rule, AgentId agent,
                                         std::span<const double> context, const AgentModel &model);

/// Same partition, built by scanning the grid from the top down. Used to cross-check that
/// payments do not depend on traversal order.
BreakpointPartition discover_breakpoints_descending(const SingleParamRule &rule, AgentId agent,
                                                    std::span<const double> context, const AgentModel &model);

/// Payment for the bid at `grid_index`:
/// p = inf_{x in I_l} v(x, A(b)) - sum_{j < l} d_j, and zero for losing bids.
///
/// If the agent wins at the lowest grid bid, no constant is subtracted (the largest of the
/// admissible payment rules).
double payment_from_characterization(const BreakpointPartition &partition, std::size_t grid_index,
                                     const AgentModel &model);

/// Allocation plus synthesized payments for a bid vector on the grid.
Outcome characterized_mechanism(const SingleParamRule &rule, std::span<const double> bids,
                                std::span<const AgentModel> models);

/// A true type t and a grid bid b that gives the agent strictly more utility than t.
struct GridDeviation
{
  AgentId agent;
  std::vector<double> context;
  double true_type;
  double misreport;
  double truthful_utility;
  double deviating_utility;

  std::string describe() const;
};

/// For every context of `agent`, every true type t and every bid b on the agent's grid, checks
/// u(t, t) >= u(t, b) - kTolerance under the synthesized payments. Throws RuleRejected for
/// rules failing the conditions.
std::vector<GridDeviation> grid_deviation_test(const SingleParamRule &rule, AgentId agent,
                                               const AgentModel &model);

/// A misreported bid function for one agent.
struct Misreport
{
  std::string label;
  std::function<double(WinnerSet)> report;
};

/// Structured misreports of agent i's bid function: uniform scalings, constants, per-set
/// noise, zero/huge patterns, set-size steps and (for single-parameter models) other values of
/// the private parameter. Deterministic in `seed`; returns exactly `count` entries.
std::vector<Misreport> structured_misreports(const ValuationProfile &truth, AgentId agent, std::size_t count,
                                             std::uint64_t seed);

/// Misreports of the private parameter only: the agent reports v_i(t', .) for each t' given.
std::vector<Misreport> parameter_misreports(const ValuationProfile &truth, AgentId agent,
                                            std::span<const double> values);

/// A mechanism with its randomness fixed.
using Realization = std::function<Outcome(const BidOracle &)>;

/// Main mechanism with fixed labels: all 3^n partitions when `exhaustive` (n <= 10), otherwise
/// `count` partitions sampled from `seed`.
std::vector<Realization> main_mechanism_realizations(std::size_t n, std::size_t count, std::uint64_t seed,
                                                     bool exhaustive = false);

std::vector<Realization> fixed_price_realizations(std::span<const double> prices);

/// The non-truthful negative control at each price.
std::vector<Realization> pay_your_bid_realizations(std::span<const double> prices);

/// Mechanism-2 with RSOP as the plug-in; each realization fixes the branch coin and the split.
std::vector<Realization> mechanism2_realizations(const ValuationProfile &profile, double alpha, std::size_t count,
                                                 std::uint64_t seed);

/// Prices worth probing for fixed-price style mechanisms: half are values v_i(S) of the profile
/// (exact ties with a value), half uniform on [0, max value].
std::vector<double> candidate_prices(const ValuationProfile &truth, std::size_t count, std::uint64_t seed);

struct DeviationPlan
{
  std::vector<AgentId> agents;  ///< empty means every agent
  std::function<std::vector<Misreport>(const ValuationProfile &, AgentId)> misreports;
};

struct DeviationViolation
{
  std::size_t realization;
  AgentId agent;
  std::string misreport;
  double truthful_utility;
  double deviating_utility;

  std::string describe() const;
};

struct DeviationReport
{
  std::size_t checks = 0;
  std::vector<DeviationViolation> violations;
};

/// Runs every realization under truthful bids and under each planned misreport, comparing
/// the deviating agent's true utility. A violation is u(misreport) > u(truth) + kTolerance.
DeviationReport deviation_test(std::span<const Realization> realizations, const ValuationProfile &truth,
                               const DeviationPlan &plan);

}  // namespace extauction
