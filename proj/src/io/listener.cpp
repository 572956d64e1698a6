#include "metis/io/listener.hpp"
#include "metis/core/dispatcher.hpp"
#include "metis/core/logger.hpp"
#include "metis/io/connection-table.hpp"
#include "metis/io/interfaces.hpp"
#include "metis/io/io-error.hpp"
#include "metis/io/stream-connection.hpp"
#include "metis/io/udp-connection.hpp"

#include <array>
#include <cerrno>
#include <cstring>
#include <fmt/format.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

namespace metis {

namespace {

constexpr int kListenBacklog = 16;
constexpr int kMaxDatagramsPerEvent = 64;

std::optional<Address>
socketAddress(int fd, bool peer)
{
  sockaddr_storage storage{};
  socklen_t length = sizeof(storage);
  auto* sa = reinterpret_cast<sockaddr*>(&storage);
  int rc = peer ? ::getpeername(fd, sa, &length) : ::getsockname(fd, sa, &length);
  if (rc != 0) {
    return std::nullopt;
  }
  return Address::fromSockaddr(sa, length);
}

} // namespace

const char*
toString(EncapType type) noexcept
{
  switch (type) {
    case EncapType::Tcp:
      return "TCP";
    case EncapType::Udp:
      return "UDP";
    case EncapType::Local:
      return "LOCAL";
  }
  return "UNKNOWN";
}

Listener::Listener(ConnectionContext& context, ConnectionTable& table, EncapType encap, std::string symbolic)
  : m_context(context)
  , m_table(table)
  , m_encap(encap)
  , m_symbolic(std::move(symbolic))
{
}

Listener::~Listener()
{
  if (m_fd >= 0) {
    m_context.dispatcher.removeDescriptor(m_fd);
    ::close(m_fd);
  }
}

void
Listener::bindSocket(int type, const Address& address)
{
  bool wantsUnix = m_encap == EncapType::Local;
  if (wantsUnix != address.isLocalPath()) {
    throw IoError(IoErrorCode::BadAddress,
                  fmt::format("{} listener cannot bind {}", toString(m_encap), address.toString()));
  }

  int fd = ::socket(address.family(), type | SOCK_NONBLOCK | SOCK_CLOEXEC, 0);
  if (fd < 0) {
    throw IoError(IoErrorCode::SocketError, fmt::format("socket: {}", std::strerror(errno)));
  }

  int on = 1;
  if (type == SOCK_STREAM && !wantsUnix) {
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &on, sizeof(on));
  }
  if (address.family() == AF_INET6) {
    ::setsockopt(fd, IPPROTO_IPV6, IPV6_V6ONLY, &on, sizeof(on));
  }

  sockaddr_storage storage{};
  socklen_t length = 0;
  try {
    length = address.toSockaddr(storage);
  }
  catch (...) {
    ::close(fd);
    throw;
  }

  if (::bind(fd, reinterpret_cast<sockaddr*>(&storage), length) != 0) {
    int error = errno;
    ::close(fd);
    auto code = (error == EADDRNOTAVAIL || error == EAFNOSUPPORT) ? IoErrorCode::BadAddress
                                                                   : IoErrorCode::BindFailed;
    throw IoError(code, fmt::format("bind {}: {}", address.toString(), std::strerror(error)));
  }
  if (type == SOCK_STREAM && ::listen(fd, kListenBacklog) != 0) {
    int error = errno;
    ::close(fd);
    throw IoError(IoErrorCode::BindFailed, fmt::format("listen {}: {}", address.toString(), std::strerror(error)));
  }

  m_fd = fd;
  m_address = wantsUnix ? address : socketAddress(fd, false).value_or(address);
  m_interfaceIndex = interfaceIndexFor(m_address);
}

StreamListener::StreamListener(ConnectionContext& context, ConnectionTable& table, EncapType encap,
                               const Address& address, std::string symbolic)
  : Listener(context, table, encap, std::move(symbolic))
{
  if (encap == EncapType::Udp) {
    throw IoError(IoErrorCode::BadAddress, "stream listener cannot use UDP");
  }
  bindSocket(SOCK_STREAM, address);
  m_ownsPath = encap == EncapType::Local;
  m_context.dispatcher.setReadHandler(m_fd, [this] {
    while (acceptOne()) {
    }
  });
  m_context.logger.logf(LogFacility::IO, LogLevel::Info, "listener {} on {}", this->symbolic(),
                        listenAddress().toString());
}

StreamListener::~StreamListener()
{
  if (m_ownsPath) {
    ::unlink(listenAddress().hostString().c_str());
  }
}

std::optional<ConnectionId>
StreamListener::acceptOne()
{
  int client = ::accept4(m_fd, nullptr, nullptr, SOCK_NONBLOCK | SOCK_CLOEXEC);
  if (client < 0) {
    if (errno != EAGAIN && errno != EWOULDBLOCK) {
      m_context.logger.logf(LogFacility::IO, LogLevel::Warning, "listener {} accept failed: {}",
                            symbolic(), std::strerror(errno));
    }
    return std::nullopt;
  }

  auto id = m_table.allocateId();
  auto local = socketAddress(client, false);
  auto remote = socketAddress(client, true);
  if (!local || !remote) {
    m_context.logger.logf(LogFacility::IO, LogLevel::Warning, "listener {} cannot read peer address", symbolic());
    ::close(client);
    return std::nullopt;
  }
  auto kind = ConnectionKind::TcpStream;
  if (encapType() == EncapType::Local) {
    kind = ConnectionKind::UnixStream;
    local = listenAddress();
    // unnamed Unix peers all look alike; keep the pair unique per connection
    if (remote->hostString().empty()) {
      remote = Address::local("@" + toString(id));
    }
  }

  auto connection = std::make_shared<StreamConnection>(m_context, id, client, AddressPair{*local, *remote},
                                                        kind, StreamConnection::Origin::Accepted);
  m_table.add(connection);
  m_context.logger.logf(LogFacility::IO, LogLevel::Info, "listener {} accepted connection {} from {}",
                        symbolic(), toUnsigned(id), remote->toString());
  return id;
}

UdpListener::UdpListener(ConnectionContext& context, ConnectionTable& table, const Address& address,
                         std::string symbolic)
  : Listener(context, table, EncapType::Udp, std::move(symbolic))
{
  bindSocket(SOCK_DGRAM, address);
  m_context.dispatcher.setReadHandler(m_fd, [this] { onReadable(); });
  m_context.logger.logf(LogFacility::IO, LogLevel::Info, "listener {} on {}", this->symbolic(),
                        listenAddress().toString());
}

ConnectionId
UdpListener::connectionFor(const Address& remote)
{
  AddressPair pair{listenAddress(), remote};
  if (auto existing = m_table.findByPair(pair)) {
    return existing->id();
  }
  auto id = m_table.allocateId();
  m_table.add(std::make_shared<UdpConnection>(m_context, id, m_fd, pair));
  m_context.logger.logf(LogFacility::IO, LogLevel::Info, "listener {} created connection {} for {}",
                        symbolic(), toUnsigned(id), remote.toString());
  return id;
}

std::optional<std::pair<ConnectionId, Message>>
UdpListener::demux(std::span<const std::uint8_t> datagram, const Address& source)
{
  if (datagram.size() < kFixedHeaderSize) {
    m_context.logger.logf(LogFacility::IO, LogLevel::Debug, "listener {} dropped {}-byte datagram from {}",
                          symbolic(), datagram.size(), source.toString());
    return std::nullopt;
  }

  auto id = connectionFor(source);
  auto connection = m_table.findById(id);
  if (auto* udp = dynamic_cast<UdpConnection*>(connection.get())) {
    udp->noteReceived();
  }

  try {
    auto message = parseMessage(Buffer(datagram.begin(), datagram.end()), id, m_context.dispatcher.now());
    return std::make_pair(id, std::move(message));
  }
  catch (const WireError& e) {
    m_context.logger.logf(LogFacility::Message, LogLevel::Warning, "listener {} dropped datagram from {}: {}",
                          symbolic(), source.toString(), e.what());
    return std::nullopt;
  }
}

void
UdpListener::onReadable()
{
  std::array<std::uint8_t, kMaxPacketSize + 1> buffer;
  for (int i = 0; i < kMaxDatagramsPerEvent; ++i) {
    sockaddr_storage source{};
    socklen_t sourceLength = sizeof(source);
    auto n = ::recvfrom(m_fd, buffer.data(), buffer.size(), 0, reinterpret_cast<sockaddr*>(&source), &sourceLength);
    if (n < 0) {
      if (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
        m_context.logger.logf(LogFacility::IO, LogLevel::Warning, "listener {} recvfrom: {}",
                              symbolic(), std::strerror(errno));
      }
      return;
    }
    auto remote = Address::fromSockaddr(reinterpret_cast<sockaddr*>(&source), sourceLength);
    if (!remote) {
      continue;
    }
    auto result = demux(std::span(buffer.data(), static_cast<std::size_t>(n)), *remote);
    if (result && m_context.deliver) {
      m_context.deliver(result->second);
    }
  }
}

} // namespace metis
