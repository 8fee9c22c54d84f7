#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "extauction/winner_set.hpp"

namespace extauction {

/// Absolute tolerance for every inequality between values.
inline constexpr double kTolerance = 1e-9;

/// Exhaustive condition checks enumerate pairs of subsets; beyond this size use sampling.
inline constexpr std::size_t kMaxExhaustiveAgents = 12;

/// Table valuations store 2^n entries per agent.
inline constexpr std::size_t kMaxTableAgents = 10;

/// A publicly known set function w_i(S), forced to zero when i is not in S.
class SetWeight
{
public:
  enum class Kind
  {
    Table,        ///< explicit value per subset, indexed by mask
    Cardinality,  ///< value depends only on |S|
  };

  SetWeight() : SetWeight(Kind::Cardinality, {0.0}) {}

  static SetWeight table(std::vector<double> by_mask) { return {Kind::Table, std::move(by_mask)}; }
  static SetWeight cardinality(std::vector<double> by_size)
  {
    return {Kind::Cardinality, std::move(by_size)};
  }
  /// Identically zero.
  static SetWeight zero() { return cardinality({0.0}); }

  Kind kind() const { return kind_; }
  const std::vector<double> &values() const { return values_; }

  /// w_i(S) without the zero-outside rule. Cardinality tables shorter than |S| repeat their last entry.
  double raw(WinnerSet s) const;

  double operator()(AgentId i, WinnerSet s) const { return s.contains(i) ? raw(s) : 0.0; }

  friend bool operator==(const SetWeight &, const SetWeight &) = default;

private:
  SetWeight(Kind kind, std::vector<double> values) : kind_(kind), values_(std::move(values)) {}

  Kind kind_;
  std::vector<double> values_;
};

/// Concave increasing shapes with f(0) = 0 for the graph externality model.
enum class ConcaveShape
{
  Sqrt,
  Log1p,
  Linear,
};

double apply_shape(ConcaveShape shape, double x);
std::string shape_name(ConcaveShape shape);
ConcaveShape parse_shape(const std::string &name);

/// Explicit value per subset, indexed by mask. Entries for sets not containing the
/// agent are kept as stored so the validator can see them.
struct TableValuation
{
  std::vector<double> values;
  friend bool operator==(const TableValuation &, const TableValuation &) = default;
};

/// v_i(t, S) = t + w(S)
struct AdditiveValuation
{
  double t = 0.0;
  SetWeight w;
  friend bool operator==(const AdditiveValuation &, const AdditiveValuation &) = default;
};

/// v_i(t, S) = t * w(S)
struct ScalarValuation
{
  double t = 0.0;
  SetWeight w;
  friend bool operator==(const ScalarValuation &, const ScalarValuation &) = default;
};

/// v_i(t, S) = t * w(S) + w_offset(S)
struct LinearValuation
{
  double t = 0.0;
  SetWeight w;
  SetWeight w_offset;
  friend bool operator==(const LinearValuation &, const LinearValuation &) = default;
};

/// v_i(t, S) = t * (1 + beta * f(|N(i) ∩ S \ {i}|)) for i in S.
///
/// Not taken from any published model; it is a convenient monotone subadditive family
/// with network structure (subadditive because f is concave with f(0) = 0).
struct GraphConcaveValuation
{
  double t = 0.0;
  double beta = 0.0;
  ConcaveShape shape = ConcaveShape::Sqrt;
  WinnerSet neighbors;
  friend bool operator==(const GraphConcaveValuation &, const GraphConcaveValuation &) = default;
};

using AgentModel =
    std::variant<TableValuation, AdditiveValuation, ScalarValuation, LinearValuation, GraphConcaveValuation>;

std::string model_name(const AgentModel &model);

/// The model's value for agent i. Tables return the stored entry even when i is not in S;
/// the parametric models are zero there.
double raw_model_value(const AgentModel &model, AgentId i, WinnerSet s);

/// Private parameter t of a single-parameter model; empty for tables.
std::optional<double> private_parameter(const AgentModel &model);

/// Copy of a single-parameter model with t replaced. Throws std::invalid_argument for tables.
AgentModel with_private_parameter(AgentModel model, double t);

/// v_i(t, S) for a single-parameter model, zero when i is not in S.
double single_parameter_value(const AgentModel &model, double t, AgentId i, WinnerSet s);

/// Black-box access to reported set valuations b_i(S).
class BidOracle
{
public:
  virtual ~BidOracle() = default;
  virtual std::size_t agent_count() const = 0;
  virtual double bid(AgentId i, WinnerSet s) const = 0;
};

/// Per-agent valuation models for a market of n agents. Immutable once built.
///
/// As a BidOracle it answers truthfully: bid(i, S) = v_i(S).
class ValuationProfile final : public BidOracle
{
public:
  /// Throws std::invalid_argument if the models are malformed for this n (table sizes,
  /// negative private parameters, n outside [1, 64]).
  explicit ValuationProfile(std::vector<AgentModel> agents,
                            std::optional<double> declared_L = std::nullopt);

  std::size_t n() const { return agents_.size(); }
  std::size_t agent_count() const override { return agents_.size(); }

  const AgentModel &agent(AgentId i) const { return agents_.at(i); }
  const std::vector<AgentModel> &agents() const { return agents_; }
  std::optional<double> declared_L() const { return declared_L_; }

  /// v_i(S); zero whenever i is not in S.
  double value(AgentId i, WinnerSet s) const
  {
    return s.contains(i) ? raw_model_value(agents_[i], i, s) : 0.0;
  }
  double bid(AgentId i, WinnerSet s) const override { return value(i, s); }

  /// The stored model value, even for sets without i (used by the validator).
  double raw_value(AgentId i, WinnerSet s) const { return raw_model_value(agents_[i], i, s); }

  /// True if every agent has an additive model.
  bool all_additive() const;

  /// Copy with agent i's private parameter replaced.
  ValuationProfile with_private_parameter(AgentId i, double t) const;

  friend bool operator==(const ValuationProfile &a, const ValuationProfile &b)
  {
    return a.agents_ == b.agents_ && a.declared_L_ == b.declared_L_;
  }

private:
  std::vector<AgentModel> agents_;
  std::optional<double> declared_L_;
};

/// Wraps an oracle and counts every value query made through it. The counter is the only
/// mutable state and lives as long as one run context.
class CountingOracle final : public BidOracle
{
public:
  explicit CountingOracle(const BidOracle &inner) : inner_(inner) {}

  std::size_t agent_count() const override { return inner_.agent_count(); }
  double bid(AgentId i, WinnerSet s) const override
  {
    ++queries_;
    return inner_.bid(i, s);
  }

  std::size_t queries() const { return queries_; }
  void reset() { queries_ = 0; }

private:
  const BidOracle &inner_;
  mutable std::size_t queries_ = 0;
};

/// Replaces one agent's reported bid function; everyone else reports as the inner oracle does.
class MisreportOracle final : public BidOracle
{
public:
  MisreportOracle(const BidOracle &inner, AgentId liar, std::function<double(WinnerSet)> report)
    : inner_(inner), liar_(liar), report_(std::move(report))
  {}

  std::size_t agent_count() const override { return inner_.agent_count(); }
  double bid(AgentId i, WinnerSet s) const override
  {
    return i == liar_ ? report_(s) : inner_.bid(i, s);
  }

private:
  const BidOracle &inner_;
  AgentId liar_;
  std::function<double(WinnerSet)> report_;
};

/// One failed instance of the valuation conditions.
struct ConditionViolation
{
  enum class Kind
  {
    Negative,       ///< v_i(S) < 0
    NonzeroOutside, ///< v_i(S) != 0 with i not in S
    NonMonotone,    ///< S ⊆ R but v_i(S) > v_i(R)
    NonSubadditive, ///< i ∈ S ∩ R but v_i(S ∪ R) > L * (v_i(S) + v_i(R))
  };

  Kind kind;
  AgentId agent;
  WinnerSet s;
  WinnerSet r;
  double lhs;  ///< the side that should be smaller
  double rhs;

  std::string describe() const;
};

struct CheckOptions
{
  enum class Mode
  {
    Exhaustive,
    Sampled,
  };

  Mode mode = Mode::Exhaustive;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  /// Relaxation factor for subadditivity (1 = plain subadditive).
  double L = 1.0;
  /// Stop collecting after this many violations.
  std::size_t max_violations = 1000;
};

/// Checks nonnegativity, zero value when losing, monotonicity and (L-relaxed) subadditivity.
/// Exhaustive mode throws std::invalid_argument for n > 12.
std::vector<ConditionViolation> check_conditions(const ValuationProfile &profile,
                                                 const CheckOptions &options = {});

/// Smallest L >= 1 with L * (v_i(A) + v_i(B)) >= v_i(A ∪ B) over all checked triples
/// (i ∈ A ∩ B). Returns +inf if some union has positive value over two zero-valued sets.
double estimate_L(const ValuationProfile &profile, const CheckOptions &options = {});

/// Exhaustive mode for small markets, sampled otherwise.
CheckOptions default_check_options(std::size_t n);

}  // namespace extauction
