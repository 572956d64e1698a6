#ifndef METIS_PROCESSOR_PIT_HPP
#define METIS_PROCESSOR_PIT_HPP

#include "metis/common.hpp"
#include "metis/wirefmt/packet.hpp"

#include <optional>
#include <unordered_map>

namespace metis {

enum class PitVerdict {
  Forward,
  Aggregate,
};

struct PitEntry
{
  Name name;
  /// Reverse routes: every connection still waiting for this name.
  ConnectionIdSet ingress;
  Ticks expiry = 0;
};

/**
 * Pending Interest Table interface. The message processor depends only on
 * this, so a different PIT can be swapped in without touching it.
 */
class Pit
{
public:
  virtual
  ~Pit() = default;

  virtual PitVerdict
  receiveInterest(const Message& interest) = 0;

  /// Consumes the live entry matching the object's name and returns its
  /// reverse routes; empty if there is none.
  virtual ConnectionIdSet
  satisfyInterest(const Message& object) = 0;

  virtual void
  removeInterest(const Message& interest) = 0;

  virtual std::optional<PitEntry>
  getPitEntry(const Message& interest) const = 0;

  virtual std::size_t
  size() const = 0;
};

/**
 * Exact-name PIT with a fixed entry lifetime.
 *
 * A new name is forwarded. The same name from a new ingress is aggregated.
 * The same name from an ingress already in the entry is a retransmission: the
 * lifetime is refreshed and it is forwarded again.
 */
class StandardPit final : public Pit
{
public:
  static constexpr Ticks kDefaultLifetime = 4000;

  explicit
  StandardPit(Clock clock, Ticks lifetime = kDefaultLifetime);

  PitVerdict
  receiveInterest(const Message& interest) override;

  ConnectionIdSet
  satisfyInterest(const Message& object) override;

  void
  removeInterest(const Message& interest) override;

  std::optional<PitEntry>
  getPitEntry(const Message& interest) const override;

  std::size_t
  size() const override
  {
    return m_entries.size();
  }

  Ticks
  lifetime() const noexcept
  {
    return m_lifetime;
  }

private:
  bool
  isLive(const PitEntry& entry) const
  {
    return m_clock() < entry.expiry;
  }

  void
  maybePurgeExpired();

private:
  Clock m_clock;
  Ticks m_lifetime;
  std::unordered_map<Name, PitEntry> m_entries;
  std::size_t m_opsSincePurge = 0;
};

} // namespace metis

#endif // METIS_PROCESSOR_PIT_HPP
