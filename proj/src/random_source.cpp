#include "extauction/random_source.hpp"

namespace extauction {

std::uint64_t mix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> path)
{
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t part : path)
  {
    h = mix64(h ^ mix64(part));
  }
  return h;
}

std::uint64_t RandomSource::below(std::uint64_t bound)
{
  // Largest multiple of bound that fits; draws at or above it are rejected.
  const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
  std::uint64_t x = engine_();
  while (x >= limit)
  {
    x = engine_();
  }
  return x % bound;
}

}  // namespace extauction
