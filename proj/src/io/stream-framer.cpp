#include "metis/io/stream-framer.hpp"

namespace metis {

void
StreamFramer::push(std::span<const std::uint8_t> bytes, const FrameHandler& onFrame)
{
  m_buffer.insert(m_buffer.end(), bytes.begin(), bytes.end());

  while (true) {
    auto available = m_buffer.size() - m_start;
    if (!m_expected) {
      if (available < kFixedHeaderSize) {
        break;
      }
      auto header = parseFixedHeader(std::span(m_buffer).subspan(m_start, kFixedHeaderSize));
      m_expected = header.packetLength;
    }
    if (available < *m_expected) {
      break;
    }

    auto begin = m_buffer.begin() + static_cast<std::ptrdiff_t>(m_start);
    Buffer frame(begin, begin + *m_expected);
    m_start += *m_expected;
    m_expected.reset();
    onFrame(std::move(frame));
  }

  if (m_start == m_buffer.size()) {
    m_buffer.clear();
    m_start = 0;
  }
  else if (m_start > 0 && m_start >= m_buffer.size() / 2) {
    m_buffer.erase(m_buffer.begin(), m_buffer.begin() + static_cast<std::ptrdiff_t>(m_start));
    m_start = 0;
  }
}

} // namespace metis
