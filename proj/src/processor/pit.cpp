#include "metis/processor/pit.hpp"

namespace metis {

StandardPit::StandardPit(Clock clock, Ticks lifetime)
  : m_clock(std::move(clock))
  , m_lifetime(lifetime)
{
}

PitVerdict
StandardPit::receiveInterest(const Message& interest)
{
  maybePurgeExpired();

  auto now = m_clock();
  auto it = m_entries.find(interest.name());
  if (it == m_entries.end() || !isLive(it->second)) {
    PitEntry entry{interest.name(), {interest.ingressId()}, now + m_lifetime};
    m_entries.insert_or_assign(interest.name(), std::move(entry));
    return PitVerdict::Forward;
  }

  auto& entry = it->second;
  if (entry.ingress.count(interest.ingressId()) > 0) {
    entry.expiry = now + m_lifetime;
    return PitVerdict::Forward;
  }
  entry.ingress.insert(interest.ingressId());
  return PitVerdict::Aggregate;
}

ConnectionIdSet
StandardPit::satisfyInterest(const Message& object)
{
  auto it = m_entries.find(object.name());
  if (it == m_entries.end()) {
    return {};
  }
  ConnectionIdSet ingress;
  if (isLive(it->second)) {
    ingress = std::move(it->second.ingress);
  }
  m_entries.erase(it);
  return ingress;
}

void
StandardPit::removeInterest(const Message& interest)
{
  m_entries.erase(interest.name());
}

std::optional<PitEntry>
StandardPit::getPitEntry(const Message& interest) const
{
  auto it = m_entries.find(interest.name());
  if (it == m_entries.end() || !isLive(it->second)) {
    return std::nullopt;
  }
  return it->second;
}

void
StandardPit::maybePurgeExpired()
{
  // amortized: one full sweep per table-size worth of insertions
  if (++m_opsSincePurge <= m_entries.size() + 64) {
    return;
  }
  m_opsSincePurge = 0;
  std::erase_if(m_entries, [this] (const auto& item) { return !isLive(item.second); });
}

} // namespace metis
