#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace extauction {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr unsigned kMaxPartitionItems = 200;

/// E[min(a, b, c)] where m items are placed independently and uniformly into three boxes
/// holding a, b and c items. Exact, by summing over all (a, b, c) with trinomial weights.
/// Requires 1 <= m <= 200.
Rational partition_min_expectation(unsigned m);

/// Pr(a <= m/9) for a ~ Binomial(m, 1/3), exact. Requires m >= 1.
Rational binomial_tail_below_ninth(unsigned m);

/// Binomial coefficient C(m, k) (zero when k > m).
boost::multiprecision::cpp_int binomial(unsigned m, unsigned k);

double to_double(const Rational &x);

}  // namespace extauction
