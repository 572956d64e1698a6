#include "metis/io/io-module.hpp"
#include "metis/core/logger.hpp"
#include "metis/io/io-error.hpp"
#include "metis/io/stream-connection.hpp"
#include "metis/io/udp-connection.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fmt/format.h>
#include <sys/socket.h>
#include <unistd.h>

namespace metis {

IoModule::IoModule(Dispatcher& dispatcher, Messenger& messenger, Logger& logger, MessageSink deliver,
                   IoOptions options)
  : m_context{dispatcher, messenger, logger, std::move(deliver), nullptr, options.loopbackIsLocal}
  , m_options(options)
{
  if (m_options.udpIdleTimeout) {
    scheduleIdleSweep();
  }
}

IoModule::~IoModule()
{
  m_idleTimer.cancel();
}

Listener&
IoModule::addListener(EncapType encap, const Address& address, std::string symbolic)
{
  if (findListener(symbolic) != nullptr) {
    throw IoError(IoErrorCode::SymbolicTaken, fmt::format("listener '{}' already exists", symbolic));
  }

  std::unique_ptr<Listener> listener;
  if (encap == EncapType::Udp) {
    listener = std::make_unique<UdpListener>(m_context, m_table, address, std::move(symbolic));
  }
  else {
    listener = std::make_unique<StreamListener>(m_context, m_table, encap, address, std::move(symbolic));
  }
  m_listeners.push_back(std::move(listener));
  return *m_listeners.back();
}

Listener*
IoModule::findListener(std::string_view symbolic) const
{
  auto it = std::find_if(m_listeners.begin(), m_listeners.end(),
                         [symbolic] (const auto& listener) { return listener->symbolic() == symbolic; });
  return it == m_listeners.end() ? nullptr : it->get();
}

ConnectionId
IoModule::createTunnel(TunnelKind kind, const std::string& symbolic, const Address& remote,
                       const std::optional<Address>& local)
{
  if (m_table.findBySymbolic(symbolic) != nullptr) {
    throw IoError(IoErrorCode::SymbolicTaken, fmt::format("connection '{}' already exists", symbolic));
  }
  if (remote.isLocalPath()) {
    throw IoError(IoErrorCode::BadAddress, "tunnels need an IP remote address");
  }
  if (local && local->family() != remote.family()) {
    throw IoError(IoErrorCode::BadAddress,
                  fmt::format("local {} and remote {} differ in family", local->toString(), remote.toString()));
  }
  return kind == TunnelKind::Tcp ? createTcpTunnel(symbolic, remote, local)
                                 : createUdpTunnel(symbolic, remote, local);
}

ConnectionId
IoModule::createTcpTunnel(const std::string& symbolic, const Address& remote, const std::optional<Address>& local)
{
  int fd = ::socket(remote.family(), SOCK_STREAM | SOCK_NONBLOCK | SOCK_CLOEXEC, 0);
  if (fd < 0) {
    throw IoError(IoErrorCode::SocketError, fmt::format("socket: {}", std::strerror(errno)));
  }

  sockaddr_storage storage{};
  if (local) {
    int on = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &on, sizeof(on));
    auto length = local->toSockaddr(storage);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&storage), length) != 0) {
      int error = errno;
      ::close(fd);
      throw IoError(IoErrorCode::BindFailed, fmt::format("bind {}: {}", local->toString(), std::strerror(error)));
    }
  }

  auto length = remote.toSockaddr(storage);
  int rc = ::connect(fd, reinterpret_cast<sockaddr*>(&storage), length);
  int connectError = (rc == 0 || errno == EINPROGRESS) ? 0 : errno;

  sockaddr_storage bound{};
  socklen_t boundLength = sizeof(bound);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &boundLength);
  auto localAddress = Address::fromSockaddr(reinterpret_cast<sockaddr*>(&bound), boundLength);
  AddressPair pair{localAddress.value_or(local.value_or(Address{})), remote};

  if (m_table.findByPair(pair) != nullptr) {
    ::close(fd);
    throw IoError(IoErrorCode::ConnectionExists,
                  fmt::format("connection {} -> {} already exists", pair.local.toString(), remote.toString()));
  }

  auto id = m_table.allocateId();
  auto connection = std::make_shared<StreamConnection>(m_context, id, fd, pair, ConnectionKind::TcpStream,
                                                       StreamConnection::Origin::Connecting);
  connection->setSymbolic(symbolic);
  m_table.add(connection);
  m_context.logger.logf(LogFacility::IO, LogLevel::Info, "tcp tunnel {} ({}) connecting to {}", symbolic,
                        toUnsigned(id), remote.toString());

  if (connectError != 0) {
    m_context.logger.logf(LogFacility::IO, LogLevel::Warning, "tcp tunnel {} connect failed: {}", symbolic,
                          std::strerror(connectError));
    connection->fail();
  }
  return id;
}

UdpListener*
IoModule::findUdpListener(const Address& remote, const std::optional<Address>& local) const
{
  UdpListener* fallback = nullptr;
  for (const auto& listener : m_listeners) {
    auto* udp = dynamic_cast<UdpListener*>(listener.get());
    if (udp == nullptr || udp->listenAddress().family() != remote.family()) {
      continue;
    }
    if (!local) {
      return udp;
    }
    const auto& bound = udp->listenAddress();
    if (bound == *local) {
      return udp;
    }
    if (bound.isWildcard() && bound.port() == local->port() && fallback == nullptr) {
      fallback = udp;
    }
  }
  return fallback;
}

ConnectionId
IoModule::createUdpTunnel(const std::string& symbolic, const Address& remote, const std::optional<Address>& local)
{
  auto* listener = findUdpListener(remote, local);
  if (listener == nullptr) {
    throw IoError(IoErrorCode::NoListener,
                  fmt::format("no UDP listener to carry a tunnel to {}", remote.toString()));
  }

  AddressPair pair{listener->listenAddress(), remote};
  if (auto existing = m_table.findByPair(pair)) {
    // a peer that already talked to us: adopt the learned connection
    if (existing->symbolic()) {
      throw IoError(IoErrorCode::ConnectionExists,
                    fmt::format("connection to {} already exists as '{}'", remote.toString(), *existing->symbolic()));
    }
    existing->setSymbolic(symbolic);
    return existing->id();
  }

  auto id = listener->connectionFor(remote);
  m_table.findById(id)->setSymbolic(symbolic);
  m_context.logger.logf(LogFacility::IO, LogLevel::Info, "udp tunnel {} ({}) to {} via {}", symbolic,
                        toUnsigned(id), remote.toString(), listener->symbolic());
  return id;
}

void
IoModule::scheduleIdleSweep()
{
  auto interval = std::max<Ticks>(*m_options.udpIdleTimeout / 2, 1);
  m_idleTimer = m_context.dispatcher.scheduleTimer(interval, [this] {
    sweepIdleConnections();
    scheduleIdleSweep();
  });
}

void
IoModule::sweepIdleConnections()
{
  auto now = m_context.dispatcher.now();
  for (const auto& connection : m_table.list()) {
    if (connection->kind() != ConnectionKind::Udp || connection->symbolic() || !connection->isUp()) {
      continue;
    }
    if (now - connection->lastActivity() >= *m_options.udpIdleTimeout) {
      m_context.logger.logf(LogFacility::IO, LogLevel::Info, "udp connection {} idle, closing",
                            toUnsigned(connection->id()));
      connection->fail();
    }
  }
}

} // namespace metis
