#include "metis/io/connection-manager.hpp"
#include "metis/core/dispatcher.hpp"
#include "metis/core/logger.hpp"
#include "metis/io/connection-table.hpp"

namespace metis {

ConnectionManager::ConnectionManager(Dispatcher& dispatcher, Messenger& messenger, ConnectionTable& table,
                                     Logger& logger, RoutePurger purgeRoutes)
  : m_dispatcher(dispatcher)
  , m_messenger(messenger)
  , m_table(table)
  , m_logger(logger)
  , m_purgeRoutes(std::move(purgeRoutes))
{
  m_messenger.registerRecipient(*this);
}

ConnectionManager::~ConnectionManager()
{
  *m_alive = false;
  m_messenger.unregisterRecipient(*this);
}

void
ConnectionManager::onMissive(const Missive& missive)
{
  m_queue.push_back(missive);
  if (m_scheduled) {
    return;
  }
  m_scheduled = true;
  m_dispatcher.post([this, alive = std::weak_ptr<bool>(m_alive)] {
    if (auto flag = alive.lock(); flag && *flag) {
      processQueue();
    }
  });
}

void
ConnectionManager::processQueue()
{
  m_scheduled = false;
  std::vector<Missive> batch;
  batch.swap(m_queue);
  for (const auto& missive : batch) {
    handle(missive);
  }
}

void
ConnectionManager::handle(const Missive& missive)
{
  m_logger.logf(LogFacility::Core, LogLevel::Debug, "connection manager: {} for connection {}",
                toString(missive.type), toUnsigned(missive.connectionId));
  if (missive.type != MissiveType::Closed) {
    return;
  }
  if (!m_table.remove(missive.connectionId)) {
    return;
  }
  if (m_purgeRoutes) {
    m_purgeRoutes(missive.connectionId);
  }
  m_logger.logf(LogFacility::Core, LogLevel::Info, "removed closed connection {}",
                toUnsigned(missive.connectionId));
}

} // namespace metis
