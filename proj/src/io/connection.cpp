#include "metis/io/connection.hpp"
#include "metis/core/dispatcher.hpp"
#include "metis/core/logger.hpp"
#include "metis/core/messenger.hpp"

#include <stdexcept>

namespace metis {

const char*
toString(ConnectionState state) noexcept
{
  switch (state) {
    case ConnectionState::Create:
      return "CREATE";
    case ConnectionState::Up:
      return "UP";
    case ConnectionState::Down:
      return "DOWN";
    case ConnectionState::Closed:
      return "CLOSED";
    case ConnectionState::Destroyed:
      return "DESTROYED";
  }
  return "UNKNOWN";
}

bool
isLegalTransition(ConnectionState from, ConnectionState to) noexcept
{
  using S = ConnectionState;
  switch (from) {
    case S::Create:
      return to == S::Up || to == S::Down;
    case S::Up:
      return to == S::Down || to == S::Destroyed;
    case S::Down:
      return to == S::Up || to == S::Closed || to == S::Destroyed;
    case S::Closed:
      return to == S::Destroyed;
    case S::Destroyed:
      return false;
  }
  return false;
}

const char*
toString(ConnectionKind kind) noexcept
{
  switch (kind) {
    case ConnectionKind::TcpStream:
      return "TCP";
    case ConnectionKind::UnixStream:
      return "LOCAL";
    case ConnectionKind::Udp:
      return "UDP";
  }
  return "UNKNOWN";
}

namespace {

MissiveType
missiveFor(ConnectionState state)
{
  switch (state) {
    case ConnectionState::Create:
      return MissiveType::Create;
    case ConnectionState::Up:
      return MissiveType::Up;
    case ConnectionState::Down:
      return MissiveType::Down;
    case ConnectionState::Closed:
      return MissiveType::Closed;
    case ConnectionState::Destroyed:
      return MissiveType::Destroyed;
  }
  return MissiveType::Destroyed;
}

} // namespace

Connection::Connection(ConnectionContext& context, ConnectionId id, AddressPair pair, ConnectionKind kind)
  : m_context(context)
  , m_id(id)
  , m_pair(std::move(pair))
  , m_kind(kind)
  , m_lastActivity(context.dispatcher.now())
{
  m_context.messenger.send(Missive{MissiveType::Create, m_id});
}

Connection::~Connection() = default;

bool
Connection::isLocal() const noexcept
{
  if (m_kind == ConnectionKind::UnixStream || m_pair.remote.isLocalPath()) {
    return true;
  }
  return m_context.loopbackIsLocal && m_pair.remote.isLoopback();
}

void
Connection::transitionTo(ConnectionState next)
{
  auto previous = m_state;
  if (!isLegalTransition(previous, next)) {
    throw std::logic_error(std::string("illegal connection transition ") + toString(previous) +
                           " -> " + toString(next));
  }
  m_state = next;
  m_context.logger.logf(LogFacility::IO, LogLevel::Debug, "connection {} {} -> {}",
                        toUnsigned(m_id), toString(previous), toString(next));
  if (m_context.onTransition) {
    m_context.onTransition(m_id, previous, next);
  }
  m_context.messenger.send(Missive{missiveFor(next), m_id});
}

void
Connection::touch() noexcept
{
  m_lastActivity = m_context.dispatcher.now();
}

void
Connection::fail()
{
  switch (m_state) {
    case ConnectionState::Create:
    case ConnectionState::Up:
      transitionTo(ConnectionState::Down);
      [[fallthrough]];
    case ConnectionState::Down:
      releaseResources();
      transitionTo(ConnectionState::Closed);
      break;
    case ConnectionState::Closed:
    case ConnectionState::Destroyed:
      break;
  }
}

void
Connection::destroy()
{
  if (m_state == ConnectionState::Destroyed) {
    return;
  }
  if (m_state == ConnectionState::Create) {
    transitionTo(ConnectionState::Down);
  }
  releaseResources();
  transitionTo(ConnectionState::Destroyed);
}

} // namespace metis
