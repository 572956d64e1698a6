#include "metis/processor/content-store.hpp"
#include "metis/core/logger.hpp"

namespace metis {

LruContentStore::LruContentStore(std::size_t capacity)
  : m_capacity(capacity)
{
}

bool
LruContentStore::putContent(const Message& content, Ticks now)
{
  if (m_capacity == 0 || content.type() != PacketType::ContentObject) {
    return false;
  }

  if (auto it = m_index.find(content.name()); it != m_index.end()) {
    m_lru.erase(it->second);
    m_index.erase(it);
  }
  else if (m_index.size() >= m_capacity) {
    m_index.erase(m_lru.back().content.name());
    m_lru.pop_back();
  }

  m_lru.push_front(StoreEntry{content, now});
  m_index.emplace(content.name(), m_lru.begin());
  return true;
}

bool
LruContentStore::removeContent(const Message& content)
{
  auto it = m_index.find(content.name());
  if (it == m_index.end()) {
    return false;
  }
  m_lru.erase(it->second);
  m_index.erase(it);
  return true;
}

std::optional<Message>
LruContentStore::matchInterest(const Message& interest)
{
  auto it = m_index.find(interest.name());
  if (it == m_index.end()) {
    return std::nullopt;
  }
  m_lru.splice(m_lru.begin(), m_lru, it->second);
  return it->second->content;
}

void
LruContentStore::log(Logger& logger) const
{
  logger.logf(LogFacility::Processor, LogLevel::Info, "LRU content store: {} of {} objects",
              objectCount(), objectCapacity());
}

std::vector<Name>
LruContentStore::namesByRecency() const
{
  std::vector<Name> names;
  names.reserve(m_lru.size());
  for (const auto& entry : m_lru) {
    names.push_back(entry.content.name());
  }
  return names;
}

} // namespace metis
