#ifndef METIS_PROCESSOR_FIB_HPP
#define METIS_PROCESSOR_FIB_HPP

#include "metis/common.hpp"
#include "metis/wirefmt/name.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

namespace metis {

struct FibEntry
{
  Name prefix;
  ConnectionIdSet nexthops;
  /// Recorded and listed, never used for selection.
  std::uint32_t cost = 0;
};

/**
 * Longest-prefix-match forwarding table.
 *
 * Entries live in one hash table keyed by prefix; a per-length census lets
 * lookup probe only the prefix lengths that exist, longest first. All
 * nexthops of the winning prefix are returned (multicast).
 */
class Fib
{
public:
  /// Adds @p nexthop to the route for @p prefix, creating it if needed.
  void
  addRoute(const Name& prefix, ConnectionId nexthop, std::uint32_t cost);

  /// Removes @p nexthop from every route; routes left empty are dropped.
  void
  removeNexthopEverywhere(ConnectionId nexthop);

  /// Nexthops of the longest prefix of @p name that has a route; empty if none.
  ConnectionIdSet
  lookup(const Name& name) const;

  /// Sorted by prefix.
  std::vector<FibEntry>
  list() const;

  std::size_t
  size() const noexcept
  {
    return m_entries.size();
  }

private:
  void
  erasePrefix(std::unordered_map<Name, FibEntry>::iterator it);

private:
  std::unordered_map<Name, FibEntry> m_entries;
  std::map<std::size_t, std::size_t, std::greater<>> m_lengthCensus;
};

} // namespace metis

#endif // METIS_PROCESSOR_FIB_HPP
