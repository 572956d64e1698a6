#ifndef METIS_IO_STREAM_FRAMER_HPP
#define METIS_IO_STREAM_FRAMER_HPP

#include "metis/wirefmt/packet.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

namespace metis {

/**
 * Recovers packet boundaries from a byte stream.
 *
 * Buffers until a fixed header is available, learns the packet length from
 * it, then buffers until the whole packet is present. There is no resync:
 * after a header error the framer must be discarded.
 */
class StreamFramer
{
public:
  using FrameHandler = std::function<void(Buffer&& frame)>;

  /// Calls @p onFrame for every completed packet, in order. Throws WireError
  /// on an invalid fixed header; frames completed before it were delivered.
  void
  push(std::span<const std::uint8_t> bytes, const FrameHandler& onFrame);

  std::size_t
  bufferedBytes() const noexcept
  {
    return m_buffer.size() - m_start;
  }

  std::optional<std::uint16_t>
  expectedLength() const noexcept
  {
    return m_expected;
  }

private:
  Buffer m_buffer;
  std::size_t m_start = 0;
  std::optional<std::uint16_t> m_expected;
};

} // namespace metis

#endif // METIS_IO_STREAM_FRAMER_HPP
