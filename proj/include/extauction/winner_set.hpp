#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace extauction {

/// Index of an agent in [0, n).
using AgentId = std::size_t;

/// Largest market size representable by a WinnerSet.
inline constexpr std::size_t kMaxAgents = 64;

/// A subset of agents, stored as a 64-bit membership mask (bit i set iff agent i is a member).
class WinnerSet
{
public:
  constexpr WinnerSet() = default;
  constexpr explicit WinnerSet(std::uint64_t mask) : mask_(mask) {}
  WinnerSet(std::initializer_list<AgentId> members);

  static WinnerSet from_members(const std::vector<AgentId> &members);

  /// The full set [n].
  static constexpr WinnerSet all(std::size_t n)
  {
    return WinnerSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  static constexpr WinnerSet singleton(AgentId i) { return WinnerSet(std::uint64_t{1} << i); }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
  constexpr bool contains(AgentId i) const { return (mask_ >> i) & 1U; }

  constexpr WinnerSet &insert(AgentId i)
  {
    mask_ |= std::uint64_t{1} << i;
    return *this;
  }
  constexpr WinnerSet &erase(AgentId i)
  {
    mask_ &= ~(std::uint64_t{1} << i);
    return *this;
  }

  constexpr WinnerSet with(AgentId i) const { return WinnerSet(mask_ | (std::uint64_t{1} << i)); }
  constexpr WinnerSet without(AgentId i) const
  {
    return WinnerSet(mask_ & ~(std::uint64_t{1} << i));
  }

  constexpr bool is_subset_of(WinnerSet other) const { return (mask_ & ~other.mask_) == 0; }
  constexpr bool disjoint(WinnerSet other) const { return (mask_ & other.mask_) == 0; }

  /// Members in increasing order.
  std::vector<AgentId> members() const;

  /// Renders as "{0,2,5}".
  std::string to_string() const;

  friend constexpr WinnerSet operator|(WinnerSet a, WinnerSet b) { return WinnerSet(a.mask_ | b.mask_); }
  friend constexpr WinnerSet operator&(WinnerSet a, WinnerSet b) { return WinnerSet(a.mask_ & b.mask_); }
  /// Set difference.
  friend constexpr WinnerSet operator-(WinnerSet a, WinnerSet b) { return WinnerSet(a.mask_ & ~b.mask_); }
  friend constexpr bool operator==(WinnerSet a, WinnerSet b) = default;
  friend constexpr auto operator<=>(WinnerSet a, WinnerSet b) = default;

  /// Forward iteration over members, lowest id first.
  class iterator
  {
  public:
    using value_type = AgentId;
    using difference_type = std::ptrdiff_t;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr AgentId operator*() const { return static_cast<AgentId>(std::countr_zero(rest_)); }
    constexpr iterator &operator++()
    {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int)
    {
      iterator copy = *this;
      ++*this;
      return copy;
    }
    friend constexpr bool operator==(iterator a, iterator b) = default;

  private:
    std::uint64_t rest_ = 0;
  };

  constexpr iterator begin() const { return iterator(mask_); }
  constexpr iterator end() const { return iterator(0); }

private:
  std::uint64_t mask_ = 0;
};

}  // namespace extauction
