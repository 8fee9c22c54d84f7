#include "extauction/winner_set.hpp"

#include <stdexcept>

namespace extauction {

WinnerSet::WinnerSet(std::initializer_list<AgentId> members)
{
  for (AgentId i : members)
  {
    if (i >= kMaxAgents)
    {
      throw std::out_of_range("agent id " + std::to_string(i) + " exceeds the 64-agent limit");
    }
    insert(i);
  }
}

WinnerSet WinnerSet::from_members(const std::vector<AgentId> &members)
{
  WinnerSet s;
  for (AgentId i : members)
  {
    if (i >= kMaxAgents)
    {
      throw std::out_of_range("agent id " + std::to_string(i) + " exceeds the 64-agent limit");
    }
    s.insert(i);
  }
  return s;
}

std::vector<AgentId> WinnerSet::members() const
{
  std::vector<AgentId> out;
  out.reserve(size());
  for (AgentId i : *this)
  {
    out.push_back(i);
  }
  return out;
}

std::string WinnerSet::to_string() const
{
  std::string out = "{";
  bool first = true;
  for (AgentId i : *this)
  {
    if (!first)
    {
      out += ',';
    }
    out += std::to_string(i);
    first = false;
  }
  out += '}';
  return out;
}

}  // namespace extauction
