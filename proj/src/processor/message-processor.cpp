#include "metis/processor/message-processor.hpp"
#include "metis/core/logger.hpp"
#include "metis/io/connection-table.hpp"
#include "metis/io/connection.hpp"

namespace metis {

MessageProcessor::MessageProcessor(ConnectionTable& table, Logger& logger, Clock clock,
                                   std::size_t storeCapacity, Ticks pitLifetime)
  : m_table(table)
  , m_logger(logger)
  , m_clock(std::move(clock))
  , m_pit(std::make_unique<StandardPit>(m_clock, pitLifetime))
  , m_store(std::make_unique<LruContentStore>(storeCapacity))
{
}

void
MessageProcessor::setContentStoreCapacity(std::size_t capacity)
{
  m_store = std::make_unique<LruContentStore>(capacity);
}

void
MessageProcessor::setContentStore(std::unique_ptr<ContentStore> store)
{
  m_store = std::move(store);
}

void
MessageProcessor::setPit(std::unique_ptr<Pit> pit)
{
  m_pit = std::move(pit);
}

void
MessageProcessor::removeConnection(ConnectionId id)
{
  m_fib.removeNexthopEverywhere(id);
}

bool
MessageProcessor::isLocalIngress(ConnectionId id) const
{
  auto connection = m_table.findById(id);
  return connection != nullptr && connection->isLocal();
}

void
MessageProcessor::processMessage(const Message& message)
{
  if (m_receiveObserver) {
    m_receiveObserver(message);
  }

  switch (message.type()) {
    case PacketType::Interest:
      processInterest(message);
      return;
    case PacketType::ContentObject:
      processContentObject(message);
      return;
    case PacketType::Control:
      ++m_stats.controlReceived;
      if (m_controlHandler) {
        m_controlHandler(message);
        return;
      }
      break;
  }
  ++m_stats.otherDropped;
}

void
MessageProcessor::processInterest(const Message& received)
{
  ++m_stats.interestsReceived;
  auto ingress = received.ingressId();

  Message interest = received;
  if (!isLocalIngress(ingress)) {
    if (received.hopLimit() == 0) {
      m_logger.logf(LogFacility::Processor, LogLevel::Debug,
                    "interest {} from {} dropped: hop limit exhausted",
                    received.name().toUri(), toString(ingress));
      ++m_stats.interestsDropped;
      return;
    }
    interest = received.withHopLimit(received.hopLimit() - 1);
  }

  if (m_pit->receiveInterest(interest) == PitVerdict::Aggregate) {
    ++m_stats.interestsAggregated;
    return;
  }

  if (m_store->objectCapacity() > 0) {
    if (auto cached = m_store->matchInterest(interest)) {
      ++m_stats.interestsSatisfiedFromStore;
      if (auto connection = m_table.findById(ingress)) {
        connection->send(*cached);
      }
      m_pit->removeInterest(interest);
      return;
    }
  }

  bool localOnly = interest.hopLimit() == 0;
  std::size_t sent = 0;
  for (auto nexthop : m_fib.lookup(interest.name())) {
    if (nexthop == ingress) {
      continue;
    }
    auto connection = m_table.findById(nexthop);
    if (connection == nullptr || !connection->isUp()) {
      continue;
    }
    if (localOnly && !connection->isLocal()) {
      continue;
    }
    if (connection->send(interest)) {
      ++sent;
    }
  }

  if (sent == 0) {
    m_logger.logf(LogFacility::Processor, LogLevel::Debug,
                  "interest {} from {} dropped: no usable route",
                  interest.name().toUri(), toString(ingress));
    ++m_stats.interestsDropped;
    m_pit->removeInterest(interest);
    return;
  }
  m_stats.interestsForwarded += sent;
}

void
MessageProcessor::processContentObject(const Message& object)
{
  ++m_stats.objectsReceived;

  auto reverseRoutes = m_pit->satisfyInterest(object);
  if (reverseRoutes.empty()) {
    m_logger.logf(LogFacility::Processor, LogLevel::Debug,
                  "object {} from {} dropped: no pending interest",
                  object.name().toUri(), toString(object.ingressId()));
    ++m_stats.objectsDropped;
    return;
  }

  if (m_store->objectCapacity() > 0) {
    m_store->putContent(object, m_clock());
  }

  for (auto id : reverseRoutes) {
    if (auto connection = m_table.findById(id)) {
      if (connection->send(object)) {
        ++m_stats.objectsForwarded;
      }
    }
  }
}

} // namespace metis
