#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "extauction/random_source.hpp"
#include "extauction/valuations.hpp"
#include "extauction/winner_set.hpp"

namespace extauction {

/// Exact expectation of the main mechanism enumerates 3^n label assignments.
inline constexpr std::size_t kMaxExactExpectationAgents = 10;

/// Default competitive ratio assumed for the plug-in classical auction (RSOP's best known bound).
inline constexpr double kDefaultAlpha = 4.68;

struct Outcome
{
  WinnerSet winners;
  std::vector<double> payments;  ///< one entry per agent, zero for losers
  double revenue = 0.0;
  std::size_t queries_used = 0;

  friend bool operator==(const Outcome &, const Outcome &) = default;
};

/// Empty outcome for n agents.
Outcome empty_outcome(std::size_t n);

/// u_i = v_i(W) - p_i for winners, -p_i otherwise (p_i is zero for losers in every mechanism here).
double utility(const ValuationProfile &truth, const Outcome &outcome, AgentId i);

enum class Label : std::uint8_t
{
  A,  ///< receives the good for free
  B,  ///< pays through cost sharing
  C,  ///< sets the price, never wins
};

/// Labelled tripartition of the agents.
class Partition3
{
public:
  explicit Partition3(std::vector<Label> labels) : labels_(std::move(labels)) {}

  /// Decodes a base-3 index: digit j (least significant first) is agent j's label (0=A, 1=B, 2=C).
  static Partition3 from_index(std::size_t n, std::uint64_t index);

  /// Labels drawn i.i.d. uniformly from {A, B, C}.
  static Partition3 sample(std::size_t n, RandomSource &rng);

  std::size_t size() const { return labels_.size(); }
  Label label(AgentId i) const { return labels_.at(i); }
  const std::vector<Label> &labels() const { return labels_; }

  WinnerSet group(Label which) const;
  WinnerSet a() const { return group(Label::A); }
  WinnerSet b() const { return group(Label::B); }
  WinnerSet c() const { return group(Label::C); }

  friend bool operator==(const Partition3 &, const Partition3 &) = default;

private:
  std::vector<Label> labels_;
};

/// Number of label assignments for n agents, 3^n.
std::uint64_t partition_count(std::size_t n);

/// Sells at price c to the maximal set of agents who all value that set at least c.
Outcome fixed_price_mechanism(const BidOracle &bids, double price);

/// Cost sharing of a target revenue r among X while Y holds the good for free.
///
/// Starting from S = X, removes in one batch every agent with b_i(S ∪ Y) < r/|S| until no
/// one is removed. Survivors pay r/|S| each, so the revenue is exactly r or zero.
/// The outcome covers X only.
Outcome cost_share(const BidOracle &bids, double r, WinnerSet x, WinnerSet y);

/// Revenue targets the main mechanism derives from the price-setting group C.
struct CostShareTarget
{
  double from_a = 0.0;  ///< r_A(C): best fixed-price revenue from C when A holds the good
  double from_b = 0.0;  ///< r_B(C): same with B holding the good
  double target() const { return from_a > from_b ? from_a : from_b; }
};

CostShareTarget cost_share_target(const BidOracle &bids, const Partition3 &partition);

/// Deterministic realization of the main mechanism for a fixed partition: A wins for free,
/// B is charged the target r(C) through cost sharing, C never wins.
Outcome main_mechanism(const BidOracle &bids, const Partition3 &partition);

/// Main mechanism with the partition drawn from `rng`.
Outcome main_mechanism(const BidOracle &bids, RandomSource &rng);

/// Expected revenue of the main mechanism averaged over all 3^n partitions.
/// Throws std::invalid_argument for n > 10.
double main_mechanism_exact_expectation(const BidOracle &bids);

/// Not truthful: allocates like the fixed-price mechanism but charges each winner its own
/// bid for the winning set. Serves as a negative control for deviation tests.
Outcome pay_your_bid_mechanism(const BidOracle &bids, double price);

/// Allocation and per-winner price of an auction without externalities.
struct ClassicalOutcome
{
  WinnerSet winners;
  std::vector<double> prices;  ///< price charged to each winner, zero for losers
};

/// A digital-goods auction over scalar bids, used as the plug-in for Mechanism-2.
class ClassicalMechanism
{
public:
  virtual ~ClassicalMechanism() = default;

  virtual ClassicalOutcome run(std::span<const double> bids, RandomSource &rng) const = 0;

  /// Every outcome with its probability. Probabilities sum to one.
  virtual std::vector<std::pair<double, ClassicalOutcome>> distribution(std::span<const double> bids) const = 0;
};

/// Revenue-maximizing single price for a group of bids; +inf for an empty group.
/// Ties go to the lower price.
double optimal_single_price(std::span<const double> bids, WinnerSet group);

/// Random sampling optimal price auction.
///
/// A fair coin splits bidders in two halves; each half is offered the optimal single price
/// of the other half. An empty half has price +inf.
class Rsop final : public ClassicalMechanism
{
public:
  /// Bidders in `first_half` form one side of the split, the rest the other.
  static ClassicalOutcome run_with_split(std::span<const double> bids, WinnerSet first_half);

  ClassicalOutcome run(std::span<const double> bids, RandomSource &rng) const override;

  /// Enumerates all 2^n splits; n <= 20.
  std::vector<std::pair<double, ClassicalOutcome>> distribution(std::span<const double> bids) const override;
};

/// Reference auction that knows the bids: sells to the optimal F^(k) set at its price.
/// Not truthful. Used to evaluate Mechanism-2's revenue bound with an exact classical revenue.
class OptimalPriceOracle final : public ClassicalMechanism
{
public:
  explicit OptimalPriceOracle(std::size_t min_winners = 2) : min_winners_(min_winners) {}

  ClassicalOutcome run(std::span<const double> bids, RandomSource &rng) const override;
  std::vector<std::pair<double, ClassicalOutcome>> distribution(std::span<const double> bids) const override;

private:
  std::size_t min_winners_;
};

/// Private values implied by reported bids under additive valuations:
/// t_i = max(0, b_i({i}) - w_i({i})). A bid equal to v_i({i}) of `public_part` maps back to its own t exactly.
std::vector<double> additive_reports(const ValuationProfile &public_part, const BidOracle &bids);

/// Mechanism-2, first branch: everyone wins and agent i pays w_i([n]).
Outcome mechanism2_serve_everyone(const ValuationProfile &profile);

/// Mechanism-2, second branch: the classical allocation with winners charged their
/// classical price plus w_i(winners).
Outcome mechanism2_classical_branch(const ValuationProfile &profile, const ClassicalOutcome &classical);

/// Mechanism-2 for additive valuations.
///
/// With probability 1/(1+alpha) serves everyone, otherwise runs `m0` on the reported private
/// values. `profile` supplies the public weights; `bids` are the reports. Throws
/// std::invalid_argument unless every agent is additive and alpha > 0.
Outcome mechanism2(const ValuationProfile &profile, const BidOracle &bids, double alpha,
                   const ClassicalMechanism &m0, RandomSource &rng);

/// Truthful reports.
Outcome mechanism2(const ValuationProfile &profile, double alpha, const ClassicalMechanism &m0,
                   RandomSource &rng);

/// Exact expected revenue of Mechanism-2 under truthful reports.
double mechanism2_exact_expectation(const ValuationProfile &profile, double alpha, const ClassicalMechanism &m0);

}  // namespace extauction
