#include "metis/wirefmt/packet.hpp"

#include "../test-helpers.hpp"

#include <gtest/gtest.h>

#include <random>

namespace metis::tests {
namespace {

// Independent byte-level encoder used as the oracle for the library encoder.
Buffer
handInterest(const std::vector<std::string>& segments, std::uint8_t hop)
{
  Buffer body;
  std::size_t nameLength = 0;
  for (const auto& s : segments) {
    nameLength += 4 + s.size();
  }
  body.insert(body.end(), {0x00, 0x00, static_cast<std::uint8_t>(nameLength >> 8),
                           static_cast<std::uint8_t>(nameLength & 0xFF)});
  for (const auto& s : segments) {
    body.insert(body.end(), {0x00, 0x01, static_cast<std::uint8_t>(s.size() >> 8),
                             static_cast<std::uint8_t>(s.size() & 0xFF)});
    body.insert(body.end(), s.begin(), s.end());
  }
  std::size_t total = 8 + body.size();
  Buffer out{0x01, 0x00, static_cast<std::uint8_t>(total >> 8),
             static_cast<std::uint8_t>(total & 0xFF), hop, 0x00, 0x00, 0x08};
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

TEST(FixedHeader, DecodesKnownBytes)
{
  Buffer bytes{0x01, 0x00, 0x00, 0x20, 0x40, 0x00, 0x00, 0x08};
  auto header = parseFixedHeader(bytes);
  EXPECT_EQ(header.version, 1);
  EXPECT_EQ(header.packetType, PacketType::Interest);
  EXPECT_EQ(header.packetLength, 32);
  EXPECT_EQ(header.hopLimit, 64);
  EXPECT_EQ(header.headerLength, 8);
}

TEST(FixedHeader, EncoderProducesKnownBytes)
{
  // 8 header + 4 name TLV + 4 segment TLV + 16 segment bytes = 32
  auto encoded = encodeInterest(Name{"0123456789abcdef"}, 64);
  ASSERT_EQ(encoded.size(), 32u);
  Buffer expected{0x01, 0x00, 0x00, 0x20, 0x40, 0x00, 0x00, 0x08};
  EXPECT_TRUE(std::equal(expected.begin(), expected.end(), encoded.begin()));
  EXPECT_EQ(parseFixedHeader(encoded), parseFixedHeader(expected));
}

TEST(FixedHeader, RejectsBadVersion)
{
  Buffer bytes{0x02, 0x00, 0x00, 0x20, 0x40, 0x00, 0x00, 0x08};
  try {
    parseFixedHeader(bytes);
    FAIL() << "expected WireError";
  }
  catch (const WireError& e) {
    EXPECT_EQ(e.code(), WireErrorCode::BadVersion);
  }
}

TEST(FixedHeader, RejectsUnknownPacketType)
{
  Buffer bytes{0x01, 0x7E, 0x00, 0x20, 0x40, 0x00, 0x00, 0x08};
  try {
    parseFixedHeader(bytes);
    FAIL() << "expected WireError";
  }
  catch (const WireError& e) {
    EXPECT_EQ(e.code(), WireErrorCode::BadPacketType);
  }
}

TEST(FixedHeader, RejectsShortPacketLength)
{
  Buffer bytes{0x01, 0x00, 0x00, 0x04, 0x40, 0x00, 0x00, 0x08};
  try {
    parseFixedHeader(bytes);
    FAIL() << "expected WireError";
  }
  catch (const WireError& e) {
    EXPECT_EQ(e.code(), WireErrorCode::BadLength);
  }
}

TEST(FixedHeader, RejectsShortHeaderLength)
{
  Buffer bytes{0x01, 0x00, 0x00, 0x20, 0x40, 0x00, 0x00, 0x07};
  EXPECT_THROW(parseFixedHeader(bytes), WireError);
}

TEST(Encoder, InterestMatchesHandEncoding)
{
  EXPECT_EQ(encodeInterest(Name{"foo", "bar"}, 7), handInterest({"foo", "bar"}, 7));
  EXPECT_EQ(encodeInterest(Name{}, 0), handInterest({}, 0));
}

TEST(Encoder, InterestRoundTrip)
{
  auto message = parseMessage(encodeInterest(Name{"a"}, 64), ConnectionId{3}, 17);
  EXPECT_EQ(message.type(), PacketType::Interest);
  EXPECT_EQ(message.hopLimit(), 64);
  EXPECT_EQ(message.name(), (Name{"a"}));
  EXPECT_EQ(message.ingressId(), ConnectionId{3});
  EXPECT_EQ(message.receiveTime(), 17u);
}

TEST(Encoder, EmptyContentObject)
{
  auto message = parseMessage(encodeContentObject(Name{}, std::string_view()), ConnectionId{1}, 0);
  EXPECT_EQ(message.type(), PacketType::ContentObject);
  EXPECT_TRUE(message.name().empty());
  EXPECT_EQ(message.payload().size(), 0u);
}

TEST(Encoder, ControlPayloadIsByteExact)
{
  std::string json = R"({"seq":1})";
  auto message = parseMessage(encodeControl(json), ConnectionId{1}, 0);
  EXPECT_EQ(message.type(), PacketType::Control);
  EXPECT_EQ(message.payloadAsString(), json);
  auto extent = message.payloadExtent();
  ASSERT_TRUE(extent.has_value());
  EXPECT_EQ(extent->length, json.size());
  EXPECT_LE(extent->offset + extent->length, message.raw().size());
}

TEST(Encoder, ControlTooLarge)
{
  std::string json(70000, 'x');
  try {
    encodeControl(json);
    FAIL() << "expected WireError";
  }
  catch (const WireError& e) {
    EXPECT_EQ(e.code(), WireErrorCode::TooLarge);
  }
}

TEST(Encoder, LargestControlFits)
{
  // header 8 + payload TLV header 4
  std::string json(kMaxPacketSize - 12, 'x');
  auto encoded = encodeControl(json);
  EXPECT_EQ(encoded.size(), kMaxPacketSize);
  EXPECT_THROW(encodeControl(json + "x"), WireError);
}

TEST(Parser, TruncatedTlv)
{
  auto bytes = handInterest({"foo"}, 1);
  // segment claims 200 bytes
  bytes[14] = 0x00;
  bytes[15] = 0xC8;
  try {
    parseMessage(bytes, ConnectionId{1}, 0);
    FAIL() << "expected WireError";
  }
  catch (const WireError& e) {
    EXPECT_EQ(e.code(), WireErrorCode::TruncatedTlv);
  }
}

TEST(Parser, MissingName)
{
  Buffer bytes{0x01, 0x00, 0x00, 0x0C, 0x40, 0x00, 0x00, 0x08, 0x01, 0x00, 0x00, 0x00};
  try {
    parseMessage(bytes, ConnectionId{1}, 0);
    FAIL() << "expected WireError";
  }
  catch (const WireError& e) {
    EXPECT_EQ(e.code(), WireErrorCode::MissingName);
  }
}

TEST(Parser, LengthMismatch)
{
  auto bytes = handInterest({"foo"}, 1);
  bytes.push_back(0);
  EXPECT_THROW(parseMessage(bytes, ConnectionId{1}, 0), WireError);
}

TEST(Parser, SkipsUnknownTlv)
{
  auto bytes = handInterest({"foo"}, 1);
  bytes.insert(bytes.begin() + 8, {0x77, 0x77, 0x00, 0x02, 0xAA, 0xBB});
  auto total = static_cast<std::uint16_t>(bytes.size());
  bytes[2] = static_cast<std::uint8_t>(total >> 8);
  bytes[3] = static_cast<std::uint8_t>(total & 0xFF);
  auto message = parseMessage(bytes, ConnectionId{1}, 0);
  EXPECT_EQ(message.name(), (Name{"foo"}));
}

TEST(Message, WithHopLimitCopies)
{
  auto original = parseMessage(encodeInterest(Name{"a", "b"}, 9), ConnectionId{4}, 0);
  auto lowered = original.withHopLimit(8);
  EXPECT_EQ(original.hopLimit(), 9);
  EXPECT_EQ(lowered.hopLimit(), 8);
  EXPECT_EQ(lowered.raw()[kHopLimitOffset], 8);
  EXPECT_EQ(lowered.name(), original.name());
  EXPECT_EQ(lowered.ingressId(), original.ingressId());
}

TEST(Property, RoundTripRandomPackets)
{
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> segments(0, 6);
  std::uniform_int_distribution<int> segmentLength(0, 20);
  std::uniform_int_distribution<int> payloadLength(0, 300);

  for (int i = 0; i < 2000; ++i) {
    Name name;
    auto n = segments(rng);
    for (int s = 0; s < n; ++s) {
      std::string segment(static_cast<std::size_t>(segmentLength(rng)), '\0');
      for (auto& c : segment) {
        c = static_cast<char>(byte(rng));
      }
      name.append(segment);
    }
    Buffer payload(static_cast<std::size_t>(payloadLength(rng)));
    for (auto& b : payload) {
      b = static_cast<std::uint8_t>(byte(rng));
    }
    auto hop = static_cast<std::uint8_t>(byte(rng));

    auto interest = encodeInterest(name, hop);
    EXPECT_EQ(parseFixedHeader(interest).packetLength, interest.size());
    auto parsedInterest = parseMessage(interest, ConnectionId{1}, 0);
    EXPECT_EQ(parsedInterest.type(), PacketType::Interest);
    EXPECT_EQ(parsedInterest.name(), name);
    EXPECT_EQ(parsedInterest.hopLimit(), hop);

    auto object = encodeContentObject(name, payload);
    EXPECT_EQ(parseFixedHeader(object).packetLength, object.size());
    auto parsedObject = parseMessage(object, ConnectionId{1}, 0);
    EXPECT_EQ(parsedObject.type(), PacketType::ContentObject);
    EXPECT_EQ(parsedObject.name(), name);
    auto bytes = parsedObject.payload();
    EXPECT_TRUE(std::equal(bytes.begin(), bytes.end(), payload.begin(), payload.end()));
  }
}

TEST(Property, RandomBytesNeverCrashParser)
{
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> length(8, 64);
  int accepted = 0;
  for (int i = 0; i < 20000; ++i) {
    Buffer bytes(static_cast<std::size_t>(length(rng)));
    for (auto& b : bytes) {
      b = static_cast<std::uint8_t>(byte(rng));
    }
    bytes[0] = 1;
    bytes[2] = 0;
    bytes[3] = static_cast<std::uint8_t>(bytes.size());
    bytes[7] = 8;
    try {
      auto message = parseMessage(bytes, ConnectionId{1}, 0);
      auto extent = message.nameExtent();
      if (extent) {
        EXPECT_LE(extent->offset + extent->length, bytes.size());
      }
      ++accepted;
    }
    catch (const WireError&) {
    }
  }
  SUCCEED() << accepted << " accepted";
}

} // namespace
} // namespace metis::tests
