#include "metis/io/udp-connection.hpp"
#include "metis/core/logger.hpp"

#include <cerrno>
#include <cstring>
#include <sys/socket.h>

namespace metis {

UdpConnection::UdpConnection(ConnectionContext& context, ConnectionId id, int listenerSocket, AddressPair pair)
  : Connection(context, id, std::move(pair), ConnectionKind::Udp)
  , m_socket(listenerSocket)
{
  transitionTo(ConnectionState::Up);
}

bool
UdpConnection::send(const Message& message)
{
  if (!isUp()) {
    return false;
  }

  sockaddr_storage remote{};
  auto length = addressPair().remote.toSockaddr(remote);
  auto raw = message.raw();
  auto n = ::sendto(m_socket, raw.data(), raw.size(), MSG_NOSIGNAL,
                    reinterpret_cast<const sockaddr*>(&remote), length);
  if (n == static_cast<ssize_t>(raw.size())) {
    return true;
  }

  int error = errno;
  if (n >= 0 || error == EAGAIN || error == EWOULDBLOCK || error == ENOBUFS || error == EINTR) {
    m_context.logger.logf(LogFacility::IO, LogLevel::Debug, "connection {} dropped datagram ({})",
                          toUnsigned(id()), n >= 0 ? "short write" : std::strerror(error));
    return false;
  }
  m_context.logger.logf(LogFacility::IO, LogLevel::Warning, "connection {} sendto failed: {}",
                        toUnsigned(id()), std::strerror(error));
  fail();
  return false;
}

} // namespace metis
