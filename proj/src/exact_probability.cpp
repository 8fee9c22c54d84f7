#include "extauction/exact_probability.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace extauction {

using boost::multiprecision::cpp_int;

namespace {

/// Pascal's triangle up to row kMaxPartitionItems, built once.
const std::vector<std::vector<cpp_int>> &pascal()
{
  static const std::vector<std::vector<cpp_int>> rows = [] {
    std::vector<std::vector<cpp_int>> t(kMaxPartitionItems + 1);
    for (unsigned m = 0; m <= kMaxPartitionItems; ++m)
    {
      t[m].resize(m + 1);
      t[m][0] = 1;
      t[m][m] = 1;
      for (unsigned k = 1; k < m; ++k)
      {
        t[m][k] = t[m - 1][k - 1] + t[m - 1][k];
      }
    }
    return t;
  }();
  return rows;
}

cpp_int power(unsigned base, unsigned exponent)
{
  cpp_int out = 1;
  for (unsigned j = 0; j < exponent; ++j)
  {
    out *= base;
  }
  return out;
}

}  // namespace

cpp_int binomial(unsigned m, unsigned k)
{
  if (k > m)
  {
    return 0;
  }
  if (m <= kMaxPartitionItems)
  {
    return pascal()[m][k];
  }
  cpp_int out = 1;
  for (unsigned j = 1; j <= k; ++j)
  {
    out = out * (m - k + j) / j;
  }
  return out;
}

Rational partition_min_expectation(unsigned m)
{
  if (m < 1 || m > kMaxPartitionItems)
  {
    throw std::invalid_argument("partition_min_expectation needs 1 <= m <= 200");
  }
  cpp_int weighted = 0;
  for (unsigned a = 0; a <= m; ++a)
  {
    for (unsigned b = 0; a + b <= m; ++b)
    {
      const unsigned c = m - a - b;
      const unsigned low = std::min({a, b, c});
      if (low > 0)
      {
        weighted += binomial(m, a) * binomial(m - a, b) * low;
      }
    }
  }
  return Rational(weighted, power(3, m));
}

Rational binomial_tail_below_ninth(unsigned m)
{
  if (m < 1)
  {
    throw std::invalid_argument("binomial tail needs m >= 1");
  }
  // a <= m/9 over integers is a <= floor(m/9); each outcome a has weight C(m,a) 2^(m-a) / 3^m
  const unsigned cutoff = m / 9;
  cpp_int mass = 0;
  for (unsigned a = 0; a <= cutoff; ++a)
  {
    mass += binomial(m, a) * power(2, m - a);
  }
  return Rational(mass, power(3, m));
}

double to_double(const Rational &x)
{
  return x.convert_to<double>();
}

}  // namespace extauction
