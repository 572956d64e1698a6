#include "metis/processor/fib.hpp"

#include <algorithm>

namespace metis {

void
Fib::addRoute(const Name& prefix, ConnectionId nexthop, std::uint32_t cost)
{
  auto [it, inserted] = m_entries.try_emplace(prefix, FibEntry{prefix, {}, cost});
  if (inserted) {
    ++m_lengthCensus[prefix.size()];
  }
  it->second.nexthops.insert(nexthop);
  it->second.cost = cost;
}

void
Fib::erasePrefix(std::unordered_map<Name, FibEntry>::iterator it)
{
  auto length = it->first.size();
  m_entries.erase(it);
  if (--m_lengthCensus[length] == 0) {
    m_lengthCensus.erase(length);
  }
}

void
Fib::removeNexthopEverywhere(ConnectionId nexthop)
{
  for (auto it = m_entries.begin(); it != m_entries.end();) {
    auto current = it++;
    current->second.nexthops.erase(nexthop);
    if (current->second.nexthops.empty()) {
      erasePrefix(current);
    }
  }
}

ConnectionIdSet
Fib::lookup(const Name& name) const
{
  for (const auto& [length, count] : m_lengthCensus) {
    if (length > name.size()) {
      continue;
    }
    auto it = m_entries.find(length == name.size() ? name : name.getPrefix(length));
    if (it != m_entries.end() && !it->second.nexthops.empty()) {
      return it->second.nexthops;
    }
  }
  return {};
}

std::vector<FibEntry>
Fib::list() const
{
  std::vector<FibEntry> entries;
  entries.reserve(m_entries.size());
  for (const auto& [prefix, entry] : m_entries) {
    entries.push_back(entry);
  }
  std::sort(entries.begin(), entries.end(),
            [] (const FibEntry& a, const FibEntry& b) { return a.prefix < b.prefix; });
  return entries;
}

} // namespace metis
