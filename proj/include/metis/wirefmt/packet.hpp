#ifndef METIS_WIREFMT_PACKET_HPP
#define METIS_WIREFMT_PACKET_HPP

#include "metis/common.hpp"
#include "metis/wirefmt/name.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace metis {

using Buffer = std::vector<std::uint8_t>;

enum class WireErrorCode {
  BadVersion,
  BadPacketType,
  BadLength,
  TruncatedTlv,
  MissingName,
  TooLarge,
};

const char*
toString(WireErrorCode code) noexcept;

class WireError : public std::runtime_error
{
public:
  WireError(WireErrorCode code, const std::string& what)
    : std::runtime_error(what)
    , m_code(code)
  {
  }

  WireErrorCode
  code() const noexcept
  {
    return m_code;
  }

private:
  WireErrorCode m_code;
};

enum class PacketType : std::uint8_t {
  Interest = 0x00,
  ContentObject = 0x01,
  Control = 0xA4,
};

const char*
toString(PacketType type) noexcept;

namespace tlv {

inline constexpr std::uint16_t Name = 0x0000;
inline constexpr std::uint16_t NameSegment = 0x0001;
inline constexpr std::uint16_t Payload = 0x0100;

inline constexpr std::size_t HeaderSize = 4;

} // namespace tlv

inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kFixedHeaderSize = 8;
inline constexpr std::size_t kMaxPacketSize = 0xFFFF;
inline constexpr std::size_t kHopLimitOffset = 4;

/**
 * The 8-byte fixed header that starts every packet:
 *
 *   0: version   1: packet type   2-3: packet length (BE)
 *   4: hop limit 5-6: reserved    7: header length
 */
struct FixedHeader
{
  std::uint8_t version = kWireVersion;
  PacketType packetType = PacketType::Interest;
  std::uint16_t packetLength = kFixedHeaderSize;
  std::uint8_t hopLimit = 0;
  std::uint8_t headerLength = kFixedHeaderSize;

  std::array<std::uint8_t, kFixedHeaderSize>
  encode() const noexcept;

  friend bool
  operator==(const FixedHeader&, const FixedHeader&) = default;
};

/// Decodes the first 8 bytes of a packet. Throws WireError.
FixedHeader
parseFixedHeader(std::span<const std::uint8_t> bytes);

struct Extent
{
  std::size_t offset = 0;
  std::size_t length = 0;

  friend bool
  operator==(const Extent&, const Extent&) = default;
};

/**
 * An immutable received packet: the wire buffer plus an extent map of the
 * fields the forwarder cares about, tagged with its ingress connection.
 *
 * Copies share the underlying buffer.
 */
class Message
{
public:
  const FixedHeader&
  header() const noexcept
  {
    return m_header;
  }

  PacketType
  type() const noexcept
  {
    return m_header.packetType;
  }

  std::uint8_t
  hopLimit() const noexcept
  {
    return m_header.hopLimit;
  }

  const Name&
  name() const noexcept
  {
    return m_name;
  }

  const std::optional<Extent>&
  nameExtent() const noexcept
  {
    return m_nameExtent;
  }

  const std::optional<Extent>&
  payloadExtent() const noexcept
  {
    return m_payloadExtent;
  }

  std::span<const std::uint8_t>
  payload() const noexcept;

  std::string_view
  payloadAsString() const noexcept;

  std::span<const std::uint8_t>
  raw() const noexcept
  {
    return *m_raw;
  }

  const std::shared_ptr<const Buffer>&
  rawBuffer() const noexcept
  {
    return m_raw;
  }

  ConnectionId
  ingressId() const noexcept
  {
    return m_ingressId;
  }

  Ticks
  receiveTime() const noexcept
  {
    return m_receiveTime;
  }

  /// A copy of this message with its own buffer and a rewritten hop limit.
  Message
  withHopLimit(std::uint8_t hopLimit) const;

private:
  friend Message
  parseMessage(std::shared_ptr<const Buffer> raw, ConnectionId ingressId, Ticks receiveTime);

  std::shared_ptr<const Buffer> m_raw;
  FixedHeader m_header;
  std::optional<Extent> m_nameExtent;
  std::optional<Extent> m_payloadExtent;
  Name m_name;
  ConnectionId m_ingressId{};
  Ticks m_receiveTime = 0;
};

/// Builds a Message from a complete packet. Throws WireError.
Message
parseMessage(std::shared_ptr<const Buffer> raw, ConnectionId ingressId, Ticks receiveTime);

inline Message
parseMessage(Buffer raw, ConnectionId ingressId, Ticks receiveTime)
{
  return parseMessage(std::make_shared<const Buffer>(std::move(raw)), ingressId, receiveTime);
}

// Encoders throw WireError(TooLarge) if the packet would exceed 65535 bytes.

Buffer
encodeInterest(const Name& name, std::uint8_t hopLimit);

Buffer
encodeContentObject(const Name& name, std::span<const std::uint8_t> payload);

Buffer
encodeContentObject(const Name& name, std::string_view payload);

Buffer
encodeControl(std::string_view jsonText);

} // namespace metis

#endif // METIS_WIREFMT_PACKET_HPP
