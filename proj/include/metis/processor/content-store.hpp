#ifndef METIS_PROCESSOR_CONTENT_STORE_HPP
#define METIS_PROCESSOR_CONTENT_STORE_HPP

#include "metis/common.hpp"
#include "metis/wirefmt/packet.hpp"

#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

namespace metis {

class Logger;

/// Content Store interface consulted by the message processor.
class ContentStore
{
public:
  virtual
  ~ContentStore() = default;

  /// May evict an older object. False if the object was not stored.
  virtual bool
  putContent(const Message& content, Ticks now) = 0;

  virtual bool
  removeContent(const Message& content) = 0;

  virtual std::optional<Message>
  matchInterest(const Message& interest) = 0;

  virtual std::size_t
  objectCapacity() const = 0;

  virtual std::size_t
  objectCount() const = 0;

  virtual void
  log(Logger& logger) const = 0;
};

/**
 * Memory-backed store with least-recently-used replacement and exact-name
 * matching. A hit refreshes recency. Capacity 0 disables the store.
 */
class LruContentStore final : public ContentStore
{
public:
  explicit
  LruContentStore(std::size_t capacity);

  bool
  putContent(const Message& content, Ticks now) override;

  bool
  removeContent(const Message& content) override;

  std::optional<Message>
  matchInterest(const Message& interest) override;

  std::size_t
  objectCapacity() const override
  {
    return m_capacity;
  }

  std::size_t
  objectCount() const override
  {
    return m_index.size();
  }

  void
  log(Logger& logger) const override;

  /// Most recently used first.
  std::vector<Name>
  namesByRecency() const;

private:
  struct StoreEntry
  {
    Message content;
    Ticks insertTime;
  };

  using LruList = std::list<StoreEntry>;

  std::size_t m_capacity;
  LruList m_lru;
  std::unordered_map<Name, LruList::iterator> m_index;
};

} // namespace metis

#endif // METIS_PROCESSOR_CONTENT_STORE_HPP
