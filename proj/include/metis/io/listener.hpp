#ifndef METIS_IO_LISTENER_HPP
#define METIS_IO_LISTENER_HPP

#include "metis/io/address.hpp"
#include "metis/io/connection.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>

namespace metis {

class ConnectionTable;

enum class EncapType {
  Tcp,
  Udp,
  Local,
};

/// "TCP", "UDP" or "LOCAL".
const char*
toString(EncapType type) noexcept;

/**
 * A bound server endpoint that turns inbound traffic into Connections.
 *
 * Construction binds the socket and registers it with the dispatcher; the
 * destructor unregisters and closes it.
 */
class Listener
{
public:
  virtual
  ~Listener();

  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  unsigned
  interfaceIndex() const noexcept
  {
    return m_interfaceIndex;
  }

  /// The bound address (with the kernel-assigned port if 0 was requested).
  const Address&
  listenAddress() const noexcept
  {
    return m_address;
  }

  EncapType
  encapType() const noexcept
  {
    return m_encap;
  }

  int
  socket() const noexcept
  {
    return m_fd;
  }

  const std::string&
  symbolic() const noexcept
  {
    return m_symbolic;
  }

protected:
  Listener(ConnectionContext& context, ConnectionTable& table, EncapType encap, std::string symbolic);

  /// Creates, binds and records the socket. Throws IoError.
  void
  bindSocket(int type, const Address& address);

  ConnectionContext& m_context;
  ConnectionTable& m_table;
  int m_fd = -1;

private:
  EncapType m_encap;
  std::string m_symbolic;
  Address m_address;
  unsigned m_interfaceIndex = 0;
};

/// TCP or Unix-domain listener. Accepted clients become StreamConnections.
class StreamListener final : public Listener
{
public:
  StreamListener(ConnectionContext& context, ConnectionTable& table, EncapType encap,
                 const Address& address, std::string symbolic);

  ~StreamListener() override;

  /// Accepts one pending client: creates an Up StreamConnection and adds it to
  /// the table. nullopt if nothing was pending or accept failed.
  std::optional<ConnectionId>
  acceptOne();

private:
  bool m_ownsPath = false;
};

class UdpListener final : public Listener
{
public:
  UdpListener(ConnectionContext& context, ConnectionTable& table, const Address& address, std::string symbolic);

  /// Maps a datagram to the connection for (listen address, @p source),
  /// creating an Up UdpConnection if none exists, and parses it. Datagrams
  /// that fail to parse are dropped; a connection created for them remains.
  std::optional<std::pair<ConnectionId, Message>>
  demux(std::span<const std::uint8_t> datagram, const Address& source);

  /// Returns the connection for @p remote, creating it if absent.
  ConnectionId
  connectionFor(const Address& remote);

private:
  void
  onReadable();
};

} // namespace metis

#endif // METIS_IO_LISTENER_HPP
