#include "metis/wirefmt/packet.hpp"

#include <fmt/format.h>

namespace metis {

const char*
toString(WireErrorCode code) noexcept
{
  switch (code) {
    case WireErrorCode::BadVersion:
      return "BadVersion";
    case WireErrorCode::BadPacketType:
      return "BadPacketType";
    case WireErrorCode::BadLength:
      return "BadLength";
    case WireErrorCode::TruncatedTlv:
      return "TruncatedTlv";
    case WireErrorCode::MissingName:
      return "MissingName";
    case WireErrorCode::TooLarge:
      return "TooLarge";
  }
  return "Unknown";
}

const char*
toString(PacketType type) noexcept
{
  switch (type) {
    case PacketType::Interest:
      return "Interest";
    case PacketType::ContentObject:
      return "ContentObject";
    case PacketType::Control:
      return "Control";
  }
  return "Unknown";
}

namespace {

std::uint16_t
readU16(std::span<const std::uint8_t> bytes, std::size_t offset)
{
  return static_cast<std::uint16_t>((bytes[offset] << 8) | bytes[offset + 1]);
}

void
appendU16(Buffer& out, std::size_t value)
{
  out.push_back(static_cast<std::uint8_t>((value >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(value & 0xFF));
}

struct Tlv
{
  std::uint16_t type;
  Extent value;
};

// Walks the TLVs in bytes[begin, end). Every TLV must fit.
template<typename Visitor>
void
walkTlvs(std::span<const std::uint8_t> bytes, std::size_t begin, std::size_t end, Visitor&& visit)
{
  std::size_t offset = begin;
  while (offset < end) {
    if (end - offset < tlv::HeaderSize) {
      throw WireError(WireErrorCode::TruncatedTlv,
                      fmt::format("TLV header at offset {} overruns buffer", offset));
    }
    auto type = readU16(bytes, offset);
    auto length = readU16(bytes, offset + 2);
    std::size_t valueOffset = offset + tlv::HeaderSize;
    if (length > end - valueOffset) {
      throw WireError(WireErrorCode::TruncatedTlv,
                      fmt::format("TLV type {:#06x} at offset {} claims {} bytes, {} available",
                                  type, offset, length, end - valueOffset));
    }
    visit(Tlv{type, Extent{valueOffset, length}});
    offset = valueOffset + length;
  }
}

void
checkSize(std::size_t total)
{
  if (total > kMaxPacketSize) {
    throw WireError(WireErrorCode::TooLarge,
                    fmt::format("packet of {} bytes exceeds {}", total, kMaxPacketSize));
  }
}

void
appendTlvHeader(Buffer& out, std::uint16_t type, std::size_t length)
{
  appendU16(out, type);
  appendU16(out, length);
}

Buffer
startPacket(PacketType type, std::uint8_t hopLimit, std::size_t bodySize)
{
  std::size_t total = kFixedHeaderSize + bodySize;
  checkSize(total);

  FixedHeader header;
  header.packetType = type;
  header.packetLength = static_cast<std::uint16_t>(total);
  header.hopLimit = hopLimit;

  auto encoded = header.encode();
  Buffer out(encoded.begin(), encoded.end());
  out.reserve(total);
  return out;
}

std::size_t
nameTlvSize(const Name& name)
{
  return tlv::HeaderSize + name.encodedValueSize();
}

void
appendName(Buffer& out, const Name& name)
{
  auto valueSize = name.encodedValueSize();
  checkSize(valueSize);
  appendTlvHeader(out, tlv::Name, valueSize);
  for (const auto& segment : name.segments()) {
    appendTlvHeader(out, tlv::NameSegment, segment.size());
    out.insert(out.end(), segment.begin(), segment.end());
  }
}

void
appendPayload(Buffer& out, std::span<const std::uint8_t> payload)
{
  appendTlvHeader(out, tlv::Payload, payload.size());
  out.insert(out.end(), payload.begin(), payload.end());
}

std::span<const std::uint8_t>
asBytes(std::string_view text)
{
  return {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()};
}

} // namespace

std::array<std::uint8_t, kFixedHeaderSize>
FixedHeader::encode() const noexcept
{
  return {version,
          static_cast<std::uint8_t>(packetType),
          static_cast<std::uint8_t>(packetLength >> 8),
          static_cast<std::uint8_t>(packetLength & 0xFF),
          hopLimit,
          0,
          0,
          headerLength};
}

FixedHeader
parseFixedHeader(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < kFixedHeaderSize) {
    throw WireError(WireErrorCode::BadLength,
                    fmt::format("fixed header needs {} bytes, got {}", kFixedHeaderSize, bytes.size()));
  }

  FixedHeader header;
  header.version = bytes[0];
  if (header.version != kWireVersion) {
    throw WireError(WireErrorCode::BadVersion, fmt::format("unsupported version {}", header.version));
  }

  switch (bytes[1]) {
    case static_cast<std::uint8_t>(PacketType::Interest):
    case static_cast<std::uint8_t>(PacketType::ContentObject):
    case static_cast<std::uint8_t>(PacketType::Control):
      header.packetType = static_cast<PacketType>(bytes[1]);
      break;
    default:
      throw WireError(WireErrorCode::BadPacketType, fmt::format("unknown packet type {:#04x}", bytes[1]));
  }

  header.packetLength = readU16(bytes, 2);
  header.hopLimit = bytes[kHopLimitOffset];
  header.headerLength = bytes[7];

  if (header.headerLength < kFixedHeaderSize || header.packetLength < header.headerLength) {
    throw WireError(WireErrorCode::BadLength,
                    fmt::format("packet length {} / header length {} inconsistent",
                                header.packetLength, header.headerLength));
  }
  return header;
}

std::span<const std::uint8_t>
Message::payload() const noexcept
{
  if (!m_payloadExtent) {
    return {};
  }
  return raw().subspan(m_payloadExtent->offset, m_payloadExtent->length);
}

std::string_view
Message::payloadAsString() const noexcept
{
  auto bytes = payload();
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

Message
Message::withHopLimit(std::uint8_t hopLimit) const
{
  auto copy = std::make_shared<Buffer>(*m_raw);
  (*copy)[kHopLimitOffset] = hopLimit;

  Message message = *this;
  message.m_raw = std::move(copy);
  message.m_header.hopLimit = hopLimit;
  return message;
}

Message
parseMessage(std::shared_ptr<const Buffer> raw, ConnectionId ingressId, Ticks receiveTime)
{
  const std::span<const std::uint8_t> bytes(*raw);
  auto header = parseFixedHeader(bytes);
  if (bytes.size() != header.packetLength) {
    throw WireError(WireErrorCode::BadLength,
                    fmt::format("buffer holds {} bytes, header claims {}", bytes.size(), header.packetLength));
  }

  Message message;
  message.m_header = header;
  message.m_ingressId = ingressId;
  message.m_receiveTime = receiveTime;

  walkTlvs(bytes, header.headerLength, bytes.size(), [&] (const Tlv& outer) {
    if (outer.type == tlv::Name && !message.m_nameExtent) {
      message.m_nameExtent = outer.value;
      auto end = outer.value.offset + outer.value.length;
      walkTlvs(bytes, outer.value.offset, end, [&] (const Tlv& inner) {
        if (inner.type == tlv::NameSegment) {
          auto segment = bytes.subspan(inner.value.offset, inner.value.length);
          message.m_name.append(std::string(segment.begin(), segment.end()));
        }
      });
    }
    else if (outer.type == tlv::Payload && !message.m_payloadExtent) {
      message.m_payloadExtent = outer.value;
    }
  });

  if (header.packetType != PacketType::Control && !message.m_nameExtent) {
    throw WireError(WireErrorCode::MissingName,
                    fmt::format("{} without a Name TLV", toString(header.packetType)));
  }
  if (header.packetType == PacketType::Control && !message.m_payloadExtent) {
    message.m_payloadExtent = Extent{header.headerLength, 0};
  }

  message.m_raw = std::move(raw);
  return message;
}

Buffer
encodeInterest(const Name& name, std::uint8_t hopLimit)
{
  auto out = startPacket(PacketType::Interest, hopLimit, nameTlvSize(name));
  appendName(out, name);
  return out;
}

Buffer
encodeContentObject(const Name& name, std::span<const std::uint8_t> payload)
{
  auto out = startPacket(PacketType::ContentObject, 0,
                         nameTlvSize(name) + tlv::HeaderSize + payload.size());
  appendName(out, name);
  appendPayload(out, payload);
  return out;
}

Buffer
encodeContentObject(const Name& name, std::string_view payload)
{
  return encodeContentObject(name, asBytes(payload));
}

Buffer
encodeControl(std::string_view jsonText)
{
  auto out = startPacket(PacketType::Control, 0, tlv::HeaderSize + jsonText.size());
  appendPayload(out, asBytes(jsonText));
  return out;
}

} // namespace metis
