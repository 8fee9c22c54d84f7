#include "extauction/valuations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "extauction/random_source.hpp"

namespace extauction {

namespace {

template <class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate_weight(const SetWeight &w, std::size_t n, const char *what)
{
  if (w.kind() == SetWeight::Kind::Table && w.values().size() != (std::size_t{1} << n))
  {
    throw std::invalid_argument(std::string(what) + ": table weight needs 2^n entries");
  }
  if (w.values().empty())
  {
    throw std::invalid_argument(std::string(what) + ": empty weight table");
  }
}

void validate_t(double t)
{
  if (!(t >= 0.0) || !std::isfinite(t))
  {
    throw std::invalid_argument("private parameter t must be finite and nonnegative");
  }
}

/// raw values for one agent over all 2^n subsets
std::vector<double> value_table(const ValuationProfile &profile, AgentId i)
{
  const std::size_t count = std::size_t{1} << profile.n();
  std::vector<double> out(count);
  for (std::size_t mask = 0; mask < count; ++mask)
  {
    out[mask] = profile.raw_value(i, WinnerSet(mask));
  }
  return out;
}

/// Size uniform on 1..n, then a uniform set of that size containing i. Uniform masks would
/// almost never produce the small sets where violations tend to sit.
WinnerSet random_subset_containing(RandomSource &rng, std::size_t n, AgentId i)
{
  const std::size_t size = 1 + rng.below(n);
  std::vector<AgentId> others;
  for (AgentId j = 0; j < n; ++j)
  {
    if (j != i)
    {
      others.push_back(j);
    }
  }
  WinnerSet s = WinnerSet::singleton(i);
  for (std::size_t k = 0; k + 1 < size; ++k)
  {
    const std::size_t pick = k + rng.below(others.size() - k);
    std::swap(others[k], others[pick]);
    s.insert(others[k]);
  }
  return s;
}

}  // namespace

double SetWeight::raw(WinnerSet s) const
{
  if (kind_ == Kind::Table)
  {
    return values_[s.mask()];
  }
  const std::size_t k = s.size();
  return k < values_.size() ? values_[k] : values_.back();
}

double apply_shape(ConcaveShape shape, double x)
{
  switch (shape)
  {
  case ConcaveShape::Sqrt:
    return std::sqrt(x);
  case ConcaveShape::Log1p:
    return std::log1p(x);
  case ConcaveShape::Linear:
    return x;
  }
  return x;
}

std::string shape_name(ConcaveShape shape)
{
  switch (shape)
  {
  case ConcaveShape::Sqrt:
    return "sqrt";
  case ConcaveShape::Log1p:
    return "log1p";
  case ConcaveShape::Linear:
    return "linear";
  }
  return "sqrt";
}

ConcaveShape parse_shape(const std::string &name)
{
  if (name == "sqrt")
  {
    return ConcaveShape::Sqrt;
  }
  if (name == "log1p")
  {
    return ConcaveShape::Log1p;
  }
  if (name == "linear")
  {
    return ConcaveShape::Linear;
  }
  throw std::invalid_argument("unknown concave shape '" + name + "'");
}

std::string model_name(const AgentModel &model)
{
  return std::visit(Overloaded{
                        [](const TableValuation &) { return std::string("table"); },
                        [](const AdditiveValuation &) { return std::string("additive"); },
                        [](const ScalarValuation &) { return std::string("scalar"); },
                        [](const LinearValuation &) { return std::string("linear"); },
                        [](const GraphConcaveValuation &) { return std::string("graph_concave"); },
                    },
                    model);
}

double raw_model_value(const AgentModel &model, AgentId i, WinnerSet s)
{
  // parametric models are only defined on sets containing i; tables store every entry
  if (!s.contains(i) && !std::holds_alternative<TableValuation>(model))
  {
    return 0.0;
  }
  return std::visit(Overloaded{
                        [&](const TableValuation &m) { return m.values[s.mask()]; },
                        [&](const AdditiveValuation &m) { return m.t + m.w(i, s); },
                        [&](const ScalarValuation &m) { return m.t * m.w(i, s); },
                        [&](const LinearValuation &m) { return m.t * m.w(i, s) + m.w_offset(i, s); },
                        [&](const GraphConcaveValuation &m) {
                          const double friends = static_cast<double>((m.neighbors & s).without(i).size());
                          return m.t * (1.0 + m.beta * apply_shape(m.shape, friends));
                        },
                    },
                    model);
}

std::optional<double> private_parameter(const AgentModel &model)
{
  return std::visit(Overloaded{
                        [](const TableValuation &) -> std::optional<double> { return std::nullopt; },
                        [](const auto &m) -> std::optional<double> { return m.t; },
                    },
                    model);
}

AgentModel with_private_parameter(AgentModel model, double t)
{
  std::visit(Overloaded{
                 [](TableValuation &) {
                   throw std::invalid_argument("table valuations have no private parameter");
                 },
                 [t](auto &m) { m.t = t; },
             },
             model);
  return model;
}

double single_parameter_value(const AgentModel &model, double t, AgentId i, WinnerSet s)
{
  if (!s.contains(i))
  {
    return 0.0;
  }
  return raw_model_value(with_private_parameter(model, t), i, s);
}

ValuationProfile::ValuationProfile(std::vector<AgentModel> agents, std::optional<double> declared_L)
  : agents_(std::move(agents)), declared_L_(declared_L)
{
  const std::size_t n = agents_.size();
  if (n == 0)
  {
    throw std::invalid_argument("a market needs at least one agent");
  }
  if (n > kMaxAgents)
  {
    throw std::invalid_argument("markets are limited to 64 agents");
  }
  if (declared_L_ && !(*declared_L_ >= 1.0))
  {
    throw std::invalid_argument("declared_L must be at least 1");
  }
  for (const AgentModel &model : agents_)
  {
    std::visit(Overloaded{
                   [n](const TableValuation &m) {
                     if (n > kMaxTableAgents)
                     {
                       throw std::invalid_argument("table valuations are limited to n <= 10");
                     }
                     if (m.values.size() != (std::size_t{1} << n))
                     {
                       throw std::invalid_argument("table valuation needs 2^n entries");
                     }
                   },
                   [n](const AdditiveValuation &m) {
                     validate_t(m.t);
                     validate_weight(m.w, n, "additive");
                   },
                   [n](const ScalarValuation &m) {
                     validate_t(m.t);
                     validate_weight(m.w, n, "scalar");
                   },
                   [n](const LinearValuation &m) {
                     validate_t(m.t);
                     validate_weight(m.w, n, "linear");
                     validate_weight(m.w_offset, n, "linear offset");
                   },
                   [n](const GraphConcaveValuation &m) {
                     validate_t(m.t);
                     if (!(m.beta >= 0.0))
                     {
                       throw std::invalid_argument("graph_concave beta must be nonnegative");
                     }
                     if (!m.neighbors.is_subset_of(WinnerSet::all(n)))
                     {
                       throw std::invalid_argument("graph_concave neighbor outside the market");
                     }
                   },
               },
               model);
  }
}

bool ValuationProfile::all_additive() const
{
  return std::all_of(agents_.begin(), agents_.end(),
                     [](const AgentModel &m) { return std::holds_alternative<AdditiveValuation>(m); });
}

ValuationProfile ValuationProfile::with_private_parameter(AgentId i, double t) const
{
  std::vector<AgentModel> copy = agents_;
  copy.at(i) = extauction::with_private_parameter(copy[i], t);
  return ValuationProfile(std::move(copy), declared_L_);
}

std::string ConditionViolation::describe() const
{
  std::ostringstream out;
  out.precision(12);
  switch (kind)
  {
  case Kind::Negative:
    out << "negative value: v_" << agent << s.to_string() << " = " << lhs;
    break;
  case Kind::NonzeroOutside:
    out << "nonzero value when losing: v_" << agent << s.to_string() << " = " << lhs;
    break;
  case Kind::NonMonotone:
    out << "not monotone: agent " << agent << ", S=" << s.to_string() << " ⊆ R=" << r.to_string()
        << " but v(S)=" << lhs << " > v(R)=" << rhs;
    break;
  case Kind::NonSubadditive:
    out << "not subadditive: agent " << agent << ", S=" << s.to_string() << ", R=" << r.to_string()
        << ": v(S∪R)=" << lhs << " > " << rhs;
    break;
  }
  return out.str();
}

CheckOptions default_check_options(std::size_t n)
{
  CheckOptions options;
  if (n > kMaxExhaustiveAgents)
  {
    options.mode = CheckOptions::Mode::Sampled;
  }
  return options;
}

std::vector<ConditionViolation> check_conditions(const ValuationProfile &profile, const CheckOptions &options)
{
  using Kind = ConditionViolation::Kind;
  const std::size_t n = profile.n();
  std::vector<ConditionViolation> out;
  auto report = [&](ConditionViolation v) {
    if (out.size() < options.max_violations)
    {
      out.push_back(v);
    }
    return out.size() >= options.max_violations;
  };

  if (options.mode == CheckOptions::Mode::Exhaustive)
  {
    if (n > kMaxExhaustiveAgents)
    {
      throw std::invalid_argument("exhaustive condition check supports n <= 12; use sampled mode");
    }
    const std::size_t count = std::size_t{1} << n;
    for (AgentId i = 0; i < n; ++i)
    {
      const std::vector<double> v = value_table(profile, i);
      for (std::size_t mask = 0; mask < count; ++mask)
      {
        const WinnerSet s(mask);
        if (v[mask] < -kTolerance && report({Kind::Negative, i, s, s, v[mask], 0.0}))
        {
          return out;
        }
        if (!s.contains(i) && std::abs(v[mask]) > kTolerance &&
            report({Kind::NonzeroOutside, i, s, s, v[mask], 0.0}))
        {
          return out;
        }
        // single-element steps suffice: monotonicity along every chain follows
        for (AgentId j = 0; j < n; ++j)
        {
          if (s.contains(j))
          {
            continue;
          }
          const WinnerSet r = s.with(j);
          if (v[mask] > v[r.mask()] + kTolerance && report({Kind::NonMonotone, i, s, r, v[mask], v[r.mask()]}))
          {
            return out;
          }
        }
      }
      for (std::size_t a = 0; a < count; ++a)
      {
        if (!WinnerSet(a).contains(i))
        {
          continue;
        }
        for (std::size_t b = a + 1; b < count; ++b)
        {
          if (!WinnerSet(b).contains(i))
          {
            continue;
          }
          const double lhs = v[a | b];
          const double rhs = options.L * (v[a] + v[b]);
          if (lhs > rhs + kTolerance &&
              report({Kind::NonSubadditive, i, WinnerSet(a), WinnerSet(b), lhs, rhs}))
          {
            return out;
          }
        }
      }
    }
    return out;
  }

  RandomSource rng(options.seed);
  const WinnerSet everyone = WinnerSet::all(n);
  for (std::size_t k = 0; k < options.samples; ++k)
  {
    const AgentId i = rng.below(n);
    const WinnerSet s = random_subset_containing(rng, n, i);
    const WinnerSet r = random_subset_containing(rng, n, i);
    const WinnerSet outside = WinnerSet(rng.next_u64() & everyone.mask()).without(i);
    const double vs = profile.raw_value(i, s);
    const double vr = profile.raw_value(i, r);
    const double vu = profile.raw_value(i, s | r);
    const double vo = profile.raw_value(i, outside);
    if (vs < -kTolerance && report({Kind::Negative, i, s, s, vs, 0.0}))
    {
      break;
    }
    if (std::abs(vo) > kTolerance && report({Kind::NonzeroOutside, i, outside, outside, vo, 0.0}))
    {
      break;
    }
    if (vs > vu + kTolerance && report({Kind::NonMonotone, i, s, s | r, vs, vu}))
    {
      break;
    }
    if (vu > options.L * (vs + vr) + kTolerance &&
        report({Kind::NonSubadditive, i, s, r, vu, options.L * (vs + vr)}))
    {
      break;
    }
  }
  return out;
}

double estimate_L(const ValuationProfile &profile, const CheckOptions &options)
{
  const std::size_t n = profile.n();
  double worst = 1.0;
  auto consider = [&worst](double vu, double va, double vb) {
    const double denom = va + vb;
    if (denom <= kTolerance)
    {
      if (vu > kTolerance)
      {
        worst = std::numeric_limits<double>::infinity();
      }
      return;
    }
    worst = std::max(worst, vu / denom);
  };

  if (options.mode == CheckOptions::Mode::Exhaustive)
  {
    if (n > kMaxExhaustiveAgents)
    {
      throw std::invalid_argument("exhaustive L estimate supports n <= 12; use sampled mode");
    }
    const std::size_t count = std::size_t{1} << n;
    for (AgentId i = 0; i < n; ++i)
    {
      const std::vector<double> v = value_table(profile, i);
      for (std::size_t a = 0; a < count; ++a)
      {
        if (!WinnerSet(a).contains(i))
        {
          continue;
        }
        for (std::size_t b = a + 1; b < count; ++b)
        {
          if (WinnerSet(b).contains(i))
          {
            consider(v[a | b], v[a], v[b]);
          }
        }
      }
    }
    return worst;
  }

  RandomSource rng(options.seed);
  for (std::size_t k = 0; k < options.samples; ++k)
  {
    const AgentId i = rng.below(n);
    const WinnerSet a = random_subset_containing(rng, n, i);
    const WinnerSet b = random_subset_containing(rng, n, i);
    consider(profile.value(i, a | b), profile.value(i, a), profile.value(i, b));
  }
  return worst;
}

}  // namespace extauction
