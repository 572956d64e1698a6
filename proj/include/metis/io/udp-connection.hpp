#ifndef METIS_IO_UDP_CONNECTION_HPP
#define METIS_IO_UDP_CONNECTION_HPP

#include "metis/io/connection.hpp"

namespace metis {

/// A UDP peer. Sends from the owning listener's socket, which it borrows;
/// the listener must outlive the connection.
class UdpConnection final : public Connection
{
public:
  UdpConnection(ConnectionContext& context, ConnectionId id, int listenerSocket, AddressPair pair);

  bool
  send(const Message& message) override;

  /// Records inbound traffic for idle tracking.
  void
  noteReceived() noexcept
  {
    touch();
  }

private:
  int m_socket;
};

} // namespace metis

#endif // METIS_IO_UDP_CONNECTION_HPP
