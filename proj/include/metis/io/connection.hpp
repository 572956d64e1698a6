#ifndef METIS_IO_CONNECTION_HPP
#define METIS_IO_CONNECTION_HPP

#include "metis/common.hpp"
#include "metis/io/address.hpp"
#include "metis/wirefmt/packet.hpp"

#include <functional>
#include <optional>
#include <string>

namespace metis {

class Dispatcher;
class Logger;
class Messenger;

/**
 * Connection lifecycle:
 *
 *   initial   -> Create
 *   Create    -> Up | Down
 *   Up        -> Down | Destroyed
 *   Down      -> Up | Closed | Destroyed
 *   Closed    -> Destroyed
 */
enum class ConnectionState {
  Create,
  Up,
  Down,
  Closed,
  Destroyed,
};

const char*
toString(ConnectionState state) noexcept;

bool
isLegalTransition(ConnectionState from, ConnectionState to) noexcept;

enum class ConnectionKind {
  TcpStream,
  UnixStream,
  Udp,
};

/// "TCP", "LOCAL" or "UDP".
const char*
toString(ConnectionKind kind) noexcept;

using MessageSink = std::function<void(const Message&)>;
using TransitionObserver = std::function<void(ConnectionId, ConnectionState from, ConnectionState to)>;

/// Services shared by every connection of one forwarder.
struct ConnectionContext
{
  Dispatcher& dispatcher;
  Messenger& messenger;
  Logger& logger;
  MessageSink deliver;
  TransitionObserver onTransition;
  // Tests turn this off to emulate remote peers over loopback.
  bool loopbackIsLocal = true;
};

/**
 * One adjacency. Subclasses implement the protocol-specific send path; the
 * base class owns the state machine and signals every transition through the
 * Messenger.
 */
class Connection
{
public:
  virtual
  ~Connection();

  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  ConnectionId
  id() const noexcept
  {
    return m_id;
  }

  const AddressPair&
  addressPair() const noexcept
  {
    return m_pair;
  }

  ConnectionKind
  kind() const noexcept
  {
    return m_kind;
  }

  ConnectionState
  state() const noexcept
  {
    return m_state;
  }

  bool
  isUp() const noexcept
  {
    return m_state == ConnectionState::Up;
  }

  /// Unix peers and IP loopback peers are local.
  bool
  isLocal() const noexcept;

  const std::optional<std::string>&
  symbolic() const noexcept
  {
    return m_symbolic;
  }

  void
  setSymbolic(std::string symbolic)
  {
    m_symbolic = std::move(symbolic);
  }

  Ticks
  lastActivity() const noexcept
  {
    return m_lastActivity;
  }

  /// Returns false without side effects unless the connection is Up.
  virtual bool
  send(const Message& message) = 0;

  /// Takes the connection down and closed (if not already) after a fatal
  /// error or administrative shutdown.
  void
  fail();

  /// Final transition, performed when the connection leaves the table.
  void
  destroy();

protected:
  Connection(ConnectionContext& context, ConnectionId id, AddressPair pair, ConnectionKind kind);

  /// Throws std::logic_error on an edge outside the state machine.
  void
  transitionTo(ConnectionState next);

  void
  touch() noexcept;

  virtual void
  releaseResources()
  {
  }

  ConnectionContext& m_context;

private:
  ConnectionId m_id;
  AddressPair m_pair;
  ConnectionKind m_kind;
  ConnectionState m_state = ConnectionState::Create;
  std::optional<std::string> m_symbolic;
  Ticks m_lastActivity = 0;
};

} // namespace metis

#endif // METIS_IO_CONNECTION_HPP
