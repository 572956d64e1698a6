#ifndef METIS_IO_STREAM_CONNECTION_HPP
#define METIS_IO_STREAM_CONNECTION_HPP

#include "metis/io/connection.hpp"
#include "metis/io/stream-framer.hpp"

#include <deque>
#include <vector>

namespace metis {

/**
 * A TCP or Unix-domain stream peer. Owns its socket, frames inbound bytes with
 * a StreamFramer, and buffers partial writes until the socket drains.
 */
class StreamConnection final : public Connection
{
public:
  static constexpr std::size_t kMaxPendingBytes = 1024 * 1024;

  enum class Origin {
    /// Accepted by a listener: Create -> Up immediately.
    Accepted,
    /// Outbound connect in progress: Create -> Down, Up once connected.
    Connecting,
  };

  /// Takes ownership of @p fd, which must be non-blocking.
  StreamConnection(ConnectionContext& context, ConnectionId id, int fd, AddressPair pair,
                   ConnectionKind kind, Origin origin);

  ~StreamConnection() override;

  bool
  send(const Message& message) override;

  /// Frames @p bytes and returns the completed messages. A fixed-header error
  /// takes the connection Down then Closed. Packets whose body fails to parse
  /// are dropped.
  std::vector<Message>
  feedBytes(std::span<const std::uint8_t> bytes);

  const StreamFramer&
  framer() const noexcept
  {
    return m_framer;
  }

  std::size_t
  pendingWriteBytes() const noexcept
  {
    return m_pendingBytes;
  }

  int
  socket() const noexcept
  {
    return m_fd;
  }

private:
  void
  onReadable();

  void
  onWritable();

  void
  onConnectComplete();

  void
  startReading();

  bool
  flush();

  void
  releaseResources() override;

private:
  int m_fd;
  StreamFramer m_framer;
  std::deque<Buffer> m_pending;
  std::size_t m_pendingOffset = 0;
  std::size_t m_pendingBytes = 0;
  bool m_registered = false;
};

} // namespace metis

#endif // METIS_IO_STREAM_CONNECTION_HPP
