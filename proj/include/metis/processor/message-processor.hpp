#ifndef METIS_PROCESSOR_MESSAGE_PROCESSOR_HPP
#define METIS_PROCESSOR_MESSAGE_PROCESSOR_HPP

#include "metis/processor/content-store.hpp"
#include "metis/processor/fib.hpp"
#include "metis/processor/pit.hpp"

#include <functional>
#include <memory>

namespace metis {

class ConnectionTable;
class Logger;

struct ProcessorStats
{
  std::uint64_t interestsReceived = 0;
  std::uint64_t interestsAggregated = 0;
  std::uint64_t interestsSatisfiedFromStore = 0;
  std::uint64_t interestsForwarded = 0;
  std::uint64_t interestsDropped = 0;
  std::uint64_t objectsReceived = 0;
  std::uint64_t objectsForwarded = 0;
  std::uint64_t objectsDropped = 0;
  std::uint64_t controlReceived = 0;
  std::uint64_t otherDropped = 0;
};

/**
 * Routes every received message down the Interest or Content Object path.
 *
 * Connections are referenced by id only; an id that no longer resolves in the
 * connection table is skipped.
 */
class MessageProcessor
{
public:
  using ControlHandler = std::function<void(const Message&)>;
  using MessageObserver = std::function<void(const Message&)>;

  MessageProcessor(ConnectionTable& table, Logger& logger, Clock clock,
                   std::size_t storeCapacity, Ticks pitLifetime = StandardPit::kDefaultLifetime);

  void
  processMessage(const Message& message);

  void
  setControlHandler(ControlHandler handler)
  {
    m_controlHandler = std::move(handler);
  }

  /// Called with every message before it is processed.
  void
  setReceiveObserver(MessageObserver observer)
  {
    m_receiveObserver = std::move(observer);
  }

  /// Replaces the content store with an empty LRU store of @p capacity.
  void
  setContentStoreCapacity(std::size_t capacity);

  void
  setContentStore(std::unique_ptr<ContentStore> store);

  void
  setPit(std::unique_ptr<Pit> pit);

  /// Drops @p id from every route.
  void
  removeConnection(ConnectionId id);

  Fib&
  fib() noexcept
  {
    return m_fib;
  }

  const Fib&
  fib() const noexcept
  {
    return m_fib;
  }

  Pit&
  pit() noexcept
  {
    return *m_pit;
  }

  ContentStore&
  contentStore() noexcept
  {
    return *m_store;
  }

  const ProcessorStats&
  stats() const noexcept
  {
    return m_stats;
  }

private:
  void
  processInterest(const Message& interest);

  void
  processContentObject(const Message& object);

  bool
  isLocalIngress(ConnectionId id) const;

private:
  ConnectionTable& m_table;
  Logger& m_logger;
  Clock m_clock;
  std::unique_ptr<Pit> m_pit;
  Fib m_fib;
  std::unique_ptr<ContentStore> m_store;
  ControlHandler m_controlHandler;
  MessageObserver m_receiveObserver;
  ProcessorStats m_stats;
};

} // namespace metis

#endif // METIS_PROCESSOR_MESSAGE_PROCESSOR_HPP
