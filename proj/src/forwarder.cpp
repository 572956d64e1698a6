#include "metis/forwarder.hpp"

namespace metis {

Forwarder::Forwarder(ForwarderOptions options)
  : m_dispatcher(options.clock ? options.clock : Clock(monotonicNow))
  , m_messenger(m_dispatcher)
  , m_interfaces(options.interfaces ? std::move(options.interfaces)
                                    : std::make_unique<SystemInterfaceProvider>())
  , m_io(m_dispatcher, m_messenger, m_logger,
         [this] (const Message& message) { m_processor.processMessage(message); }, options.io)
  , m_processor(m_io.table(), m_logger, [this] { return m_dispatcher.now(); },
                options.storeCapacity, options.pitLifetime)
  , m_connectionManager(m_dispatcher, m_messenger, m_io.table(), m_logger,
                        [this] (ConnectionId id) { m_processor.removeConnection(id); })
  , m_configuration(m_io, m_processor, *m_interfaces, m_logger,
                    [this] { return m_dispatcher.now(); })
{
  m_processor.setControlHandler([this] (const Message& message) {
    m_configuration.handleControlPacket(message);
  });
}

Forwarder::~Forwarder()
{
  m_processor.setControlHandler(nullptr);
}

ControlResponse
Forwarder::command(std::string_view line)
{
  try {
    auto parsed = parseCommand(line);
    if (!parsed) {
      return ack();
    }
    return m_configuration.execute(*parsed);
  }
  catch (const SyntaxError& e) {
    return nack(e.what());
  }
}

} // namespace metis
