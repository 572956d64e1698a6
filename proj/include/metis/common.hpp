#ifndef METIS_COMMON_HPP
#define METIS_COMMON_HPP

#include <cstdint>
#include <functional>
#include <set>
#include <string>

namespace metis {

/// Milliseconds on a monotonic clock.
using Ticks = std::uint64_t;

using Clock = std::function<Ticks()>;

/// Reads the process-wide monotonic clock in milliseconds.
Ticks
monotonicNow();

/// Identifier of a Connection. Other tables reference connections only through
/// this key; ids are never reused within a process lifetime.
enum class ConnectionId : std::uint32_t {};

constexpr std::uint32_t
toUnsigned(ConnectionId id) noexcept
{
  return static_cast<std::uint32_t>(id);
}

inline std::string
toString(ConnectionId id)
{
  return std::to_string(toUnsigned(id));
}

using ConnectionIdSet = std::set<ConnectionId>;

} // namespace metis

#endif // METIS_COMMON_HPP
