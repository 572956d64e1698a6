#ifndef METIS_IO_CONNECTION_MANAGER_HPP
#define METIS_IO_CONNECTION_MANAGER_HPP

#include "metis/core/messenger.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace metis {

class ConnectionTable;
class Dispatcher;
class Logger;

/**
 * Cleans up after connections that went away. Missives are queued on receipt
 * and handled in a later dispatcher pass; a Closed connection is removed from
 * the table and purged from every route.
 */
class ConnectionManager final : public MessengerRecipient
{
public:
  using RoutePurger = std::function<void(ConnectionId)>;

  ConnectionManager(Dispatcher& dispatcher, Messenger& messenger, ConnectionTable& table, Logger& logger,
                    RoutePurger purgeRoutes);

  ~ConnectionManager() override;

  void
  onMissive(const Missive& missive) override;

private:
  void
  processQueue();

  void
  handle(const Missive& missive);

private:
  Dispatcher& m_dispatcher;
  Messenger& m_messenger;
  ConnectionTable& m_table;
  Logger& m_logger;
  RoutePurger m_purgeRoutes;
  std::vector<Missive> m_queue;
  bool m_scheduled = false;
  std::shared_ptr<bool> m_alive = std::make_shared<bool>(true);
};

} // namespace metis

#endif // METIS_IO_CONNECTION_MANAGER_HPP
