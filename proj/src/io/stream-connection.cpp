#include "metis/io/stream-connection.hpp"
#include "metis/core/dispatcher.hpp"
#include "metis/core/logger.hpp"

#include <array>
#include <cerrno>
#include <cstring>
#include <sys/socket.h>
#include <unistd.h>

namespace metis {

namespace {

constexpr std::size_t kReadChunk = 64 * 1024;
constexpr int kMaxReadsPerEvent = 16;

bool
isTransient(int error)
{
  return error == EAGAIN || error == EWOULDBLOCK || error == EINTR;
}

} // namespace

StreamConnection::StreamConnection(ConnectionContext& context, ConnectionId id, int fd, AddressPair pair,
                                   ConnectionKind kind, Origin origin)
  : Connection(context, id, std::move(pair), kind)
  , m_fd(fd)
{
  m_registered = true;
  if (origin == Origin::Accepted) {
    transitionTo(ConnectionState::Up);
    startReading();
  }
  else {
    transitionTo(ConnectionState::Down);
    m_context.dispatcher.setWriteHandler(m_fd, [this] { onConnectComplete(); });
  }
}

StreamConnection::~StreamConnection()
{
  if (m_registered) {
    m_context.dispatcher.removeDescriptor(m_fd);
  }
  ::close(m_fd);
}

void
StreamConnection::startReading()
{
  m_context.dispatcher.setReadHandler(m_fd, [this] { onReadable(); });
}

void
StreamConnection::releaseResources()
{
  if (m_registered) {
    m_context.dispatcher.removeDescriptor(m_fd);
    m_registered = false;
  }
  m_pending.clear();
  m_pendingBytes = 0;
  m_pendingOffset = 0;
}

void
StreamConnection::onConnectComplete()
{
  int error = 0;
  socklen_t length = sizeof(error);
  if (::getsockopt(m_fd, SOL_SOCKET, SO_ERROR, &error, &length) != 0) {
    error = errno;
  }
  m_context.dispatcher.clearWriteHandler(m_fd);

  if (error != 0) {
    m_context.logger.logf(LogFacility::IO, LogLevel::Warning, "connection {} connect to {} failed: {}",
                          toUnsigned(id()), addressPair().remote.toString(), std::strerror(error));
    fail();
    return;
  }

  m_context.logger.logf(LogFacility::IO, LogLevel::Info, "connection {} connected to {}",
                        toUnsigned(id()), addressPair().remote.toString());
  transitionTo(ConnectionState::Up);
  startReading();
}

void
StreamConnection::onReadable()
{
  std::array<std::uint8_t, kReadChunk> chunk;
  for (int i = 0; i < kMaxReadsPerEvent && isUp(); ++i) {
    auto n = ::read(m_fd, chunk.data(), chunk.size());
    if (n > 0) {
      touch();
      for (const auto& message : feedBytes(std::span(chunk.data(), static_cast<std::size_t>(n)))) {
        if (m_context.deliver) {
          m_context.deliver(message);
        }
      }
      continue;
    }
    if (n < 0 && isTransient(errno)) {
      return;
    }
    if (n == 0) {
      m_context.logger.logf(LogFacility::IO, LogLevel::Info, "connection {} closed by peer", toUnsigned(id()));
    }
    else {
      m_context.logger.logf(LogFacility::IO, LogLevel::Info, "connection {} read error: {}",
                            toUnsigned(id()), std::strerror(errno));
    }
    fail();
    return;
  }
}

std::vector<Message>
StreamConnection::feedBytes(std::span<const std::uint8_t> bytes)
{
  std::vector<Message> messages;
  if (!isUp()) {
    return messages;
  }

  auto now = m_context.dispatcher.now();
  try {
    m_framer.push(bytes, [&] (Buffer&& frame) {
      try {
        messages.push_back(parseMessage(std::move(frame), id(), now));
      }
      catch (const WireError& e) {
        m_context.logger.logf(LogFacility::Message, LogLevel::Warning,
                              "connection {} dropped malformed packet: {}", toUnsigned(id()), e.what());
      }
    });
  }
  catch (const WireError& e) {
    m_context.logger.logf(LogFacility::IO, LogLevel::Warning, "connection {} framing error: {}",
                          toUnsigned(id()), e.what());
    fail();
  }
  return messages;
}

bool
StreamConnection::send(const Message& message)
{
  if (!isUp()) {
    return false;
  }

  auto raw = message.raw();
  if (m_pending.empty()) {
    auto n = ::send(m_fd, raw.data(), raw.size(), MSG_NOSIGNAL);
    if (n < 0 && !isTransient(errno)) {
      m_context.logger.logf(LogFacility::IO, LogLevel::Info, "connection {} send error: {}",
                            toUnsigned(id()), std::strerror(errno));
      fail();
      return false;
    }
    auto written = n < 0 ? 0 : static_cast<std::size_t>(n);
    if (written == raw.size()) {
      return true;
    }
    m_pending.emplace_back(raw.begin() + static_cast<std::ptrdiff_t>(written), raw.end());
    m_pendingOffset = 0;
    m_pendingBytes = raw.size() - written;
    m_context.dispatcher.setWriteHandler(m_fd, [this] { onWritable(); });
    return true;
  }

  if (m_pendingBytes + raw.size() > kMaxPendingBytes) {
    m_context.logger.logf(LogFacility::IO, LogLevel::Warning,
                          "connection {} write backlog exceeds {} bytes", toUnsigned(id()), kMaxPendingBytes);
    fail();
    return false;
  }
  m_pending.emplace_back(raw.begin(), raw.end());
  m_pendingBytes += raw.size();
  return true;
}

void
StreamConnection::onWritable()
{
  if (!flush()) {
    return;
  }
  if (m_pending.empty()) {
    m_context.dispatcher.clearWriteHandler(m_fd);
  }
}

bool
StreamConnection::flush()
{
  while (!m_pending.empty()) {
    const auto& front = m_pending.front();
    auto remaining = front.size() - m_pendingOffset;
    auto n = ::send(m_fd, front.data() + m_pendingOffset, remaining, MSG_NOSIGNAL);
    if (n < 0) {
      if (isTransient(errno)) {
        return true;
      }
      fail();
      return false;
    }
    m_pendingBytes -= static_cast<std::size_t>(n);
    if (static_cast<std::size_t>(n) < remaining) {
      m_pendingOffset += static_cast<std::size_t>(n);
      return true;
    }
    m_pending.pop_front();
    m_pendingOffset = 0;
  }
  return true;
}

} // namespace metis
