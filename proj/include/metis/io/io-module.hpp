#ifndef METIS_IO_IO_MODULE_HPP
#define METIS_IO_IO_MODULE_HPP

#include "metis/core/dispatcher.hpp"
#include "metis/io/connection-table.hpp"
#include "metis/io/listener.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace metis {

struct IoOptions
{
  /// Idle time after which a learned (non-tunnel) UDP connection is taken
  /// Down then Closed. Disabled when unset.
  std::optional<Ticks> udpIdleTimeout;
  bool loopbackIsLocal = true;
};

enum class TunnelKind {
  Tcp,
  Udp,
};

/**
 * The IO half of the forwarder: listeners, protocol connections, tunnels and
 * the connection table they populate.
 */
class IoModule
{
public:
  IoModule(Dispatcher& dispatcher, Messenger& messenger, Logger& logger, MessageSink deliver,
           IoOptions options = {});

  ~IoModule();

  IoModule(const IoModule&) = delete;
  IoModule& operator=(const IoModule&) = delete;

  /// Throws IoError (BindFailed, BadAddress, SymbolicTaken).
  Listener&
  addListener(EncapType encap, const Address& address, std::string symbolic);

  /**
   * Opens an outbound connection. A TCP tunnel starts Down and goes Up once the
   * connect completes (or Closed if it fails). A UDP tunnel borrows the socket of a
   * matching UDP listener and starts Up.
   *
   * Throws IoError (SymbolicTaken, NoListener, BadAddress, SocketError).
   */
  ConnectionId
  createTunnel(TunnelKind kind, const std::string& symbolic, const Address& remote,
               const std::optional<Address>& local = std::nullopt);

  const std::vector<std::unique_ptr<Listener>>&
  listeners() const noexcept
  {
    return m_listeners;
  }

  Listener*
  findListener(std::string_view symbolic) const;

  ConnectionTable&
  table() noexcept
  {
    return m_table;
  }

  const ConnectionTable&
  table() const noexcept
  {
    return m_table;
  }

  ConnectionContext&
  context() noexcept
  {
    return m_context;
  }

  void
  setTransitionObserver(TransitionObserver observer)
  {
    m_context.onTransition = std::move(observer);
  }

private:
  UdpListener*
  findUdpListener(const Address& remote, const std::optional<Address>& local) const;

  ConnectionId
  createTcpTunnel(const std::string& symbolic, const Address& remote, const std::optional<Address>& local);

  ConnectionId
  createUdpTunnel(const std::string& symbolic, const Address& remote, const std::optional<Address>& local);

  void
  scheduleIdleSweep();

  void
  sweepIdleConnections();

private:
  ConnectionContext m_context;
  IoOptions m_options;
  std::vector<std::unique_ptr<Listener>> m_listeners;
  ConnectionTable m_table;
  TimerHandle m_idleTimer;
};

} // namespace metis

#endif // METIS_IO_IO_MODULE_HPP
