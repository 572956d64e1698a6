#ifndef METIS_FORWARDER_HPP
#define METIS_FORWARDER_HPP

#include "metis/config/configuration.hpp"
#include "metis/core/dispatcher.hpp"
#include "metis/core/logger.hpp"
#include "metis/core/messenger.hpp"
#include "metis/io/connection-manager.hpp"
#include "metis/io/interfaces.hpp"
#include "metis/io/io-module.hpp"
#include "metis/processor/message-processor.hpp"

#include <memory>

namespace metis {

inline constexpr std::size_t kDefaultStoreCapacity = 100000;

struct ForwarderOptions
{
  std::size_t storeCapacity = kDefaultStoreCapacity;
  Ticks pitLifetime = StandardPit::kDefaultLifetime;
  IoOptions io;
  /// Defaults to the monotonic clock.
  Clock clock;
  /// Defaults to the system's interfaces.
  std::unique_ptr<InterfaceProvider> interfaces;
};

/**
 * One complete forwarder: dispatcher, messenger, I/O, message processor,
 * connection manager, and configuration executor, wired together.
 */
class Forwarder
{
public:
  explicit
  Forwarder(ForwarderOptions options = {});

  Forwarder(const Forwarder&) = delete;
  Forwarder& operator=(const Forwarder&) = delete;

  ~Forwarder();

  Logger&
  logger() noexcept
  {
    return m_logger;
  }

  Dispatcher&
  dispatcher() noexcept
  {
    return m_dispatcher;
  }

  Messenger&
  messenger() noexcept
  {
    return m_messenger;
  }

  IoModule&
  io() noexcept
  {
    return m_io;
  }

  ConnectionTable&
  connectionTable() noexcept
  {
    return m_io.table();
  }

  MessageProcessor&
  processor() noexcept
  {
    return m_processor;
  }

  Configuration&
  configuration() noexcept
  {
    return m_configuration;
  }

  /// Shorthand for parsing and executing one command line.
  ControlResponse
  command(std::string_view line);

private:
  Logger m_logger;
  Dispatcher m_dispatcher;
  Messenger m_messenger;
  std::unique_ptr<InterfaceProvider> m_interfaces;
  IoModule m_io;
  MessageProcessor m_processor;
  ConnectionManager m_connectionManager;
  Configuration m_configuration;
};

} // namespace metis

#endif // METIS_FORWARDER_HPP
