#include "acceptance.hpp"

#include "../common/oracles.hpp"

#include "metis/core/dispatcher.hpp"
#include "metis/core/logger.hpp"
#include "metis/core/messenger.hpp"
#include "metis/io/stream-connection.hpp"
#include "metis/processor/content-store.hpp"
#include "metis/processor/fib.hpp"

#include <map>
#include <random>
#include <sys/socket.h>
#include <unistd.h>

namespace metis::acceptance {
namespace {

using tests::bruteForceLpm;
using tests::ReferenceLru;

void
putU16(Buffer& out, std::size_t value)
{
  out.push_back(static_cast<std::uint8_t>(value >> 8));
  out.push_back(static_cast<std::uint8_t>(value & 0xFF));
}

/// A packet of exactly @p size bytes with a valid fixed header. Most bodies
/// are well formed; the rest are random bytes the parser must reject or skip.
Buffer
randomPacket(std::mt19937& rng, std::size_t size)
{
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> percent(0, 99);
  auto type = percent(rng) < 50 ? 0x00 : 0x01;

  Buffer out{0x01, static_cast<std::uint8_t>(type)};
  putU16(out, size);
  out.insert(out.end(), {static_cast<std::uint8_t>(byte(rng)), 0x00, 0x00, 0x08});

  auto body = size - 8;
  if (body < 8 || percent(rng) < 15) {
    for (std::size_t i = 0; i < body; ++i) {
      out.push_back(static_cast<std::uint8_t>(byte(rng)));
    }
    return out;
  }

  auto segment = std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(body - 8, 40))(rng);
  auto rest = body - 8 - segment;
  if (rest < 4) {
    segment += rest;
    rest = 0;
  }
  putU16(out, 0x0000);
  putU16(out, 4 + segment);
  putU16(out, 0x0001);
  putU16(out, segment);
  for (std::size_t i = 0; i < segment; ++i) {
    out.push_back(static_cast<std::uint8_t>('a' + byte(rng) % 26));
  }
  if (rest > 0) {
    putU16(out, 0x0100);
    putU16(out, rest - 4);
    for (std::size_t i = 0; i < rest - 4; ++i) {
      out.push_back(static_cast<std::uint8_t>(byte(rng)));
    }
  }
  return out;
}

/// Whole-buffer reference: walk the packet lengths and parse each slice.
std::vector<Buffer>
parseWhole(const Buffer& stream)
{
  std::vector<Buffer> accepted;
  std::size_t offset = 0;
  while (offset + 8 <= stream.size()) {
    std::size_t length = (std::size_t{stream[offset + 2]} << 8) | stream[offset + 3];
    Buffer slice(stream.begin() + static_cast<std::ptrdiff_t>(offset),
                 stream.begin() + static_cast<std::ptrdiff_t>(offset + length));
    try {
      parseMessage(slice, ConnectionId{1}, 0);
      accepted.push_back(std::move(slice));
    }
    catch (const WireError&) {
    }
    offset += length;
  }
  return accepted;
}

struct Core
{
  Core()
    : messenger(dispatcher)
    , context{dispatcher, messenger, logger, nullptr, nullptr, true}
  {
    logger.setAllLevels(LogLevel::Off);
  }

  Logger logger;
  Dispatcher dispatcher;
  Messenger messenger;
  ConnectionContext context;
};

} // namespace

Outcome
framingFuzz()
{
  auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(20150101);
  std::uniform_int_distribution<int> packetCount(1, 10);
  std::uniform_int_distribution<std::size_t> packetSize(8, 2048);
  std::uniform_int_distribution<int> cutCount(0, 24);
  Core core;
  std::size_t deliveries = 0;

  for (int sequence = 0; sequence < 1000; ++sequence) {
    Buffer stream;
    for (int i = packetCount(rng); i > 0; --i) {
      auto packet = randomPacket(rng, packetSize(rng));
      stream.insert(stream.end(), packet.begin(), packet.end());
    }
    auto expected = parseWhole(stream);

    for (int chunking = 0; chunking < 10; ++chunking) {
      std::vector<std::size_t> cuts{0, stream.size()};
      std::uniform_int_distribution<std::size_t> position(1, stream.size() - 1);
      for (int c = cutCount(rng); c > 0; --c) {
        cuts.push_back(position(rng));
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

      int fds[2];
      if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_NONBLOCK, 0, fds) != 0) {
        return fail("socketpair failed");
      }
      std::vector<Buffer> got;
      {
        StreamConnection connection(core.context, ConnectionId{1}, fds[0],
                                    {Address::local("a"), Address::local("b")}, ConnectionKind::UnixStream,
                                    StreamConnection::Origin::Accepted);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
          std::span<const std::uint8_t> chunk(stream.data() + cuts[k], cuts[k + 1] - cuts[k]);
          for (const auto& message : connection.feedBytes(chunk)) {
            got.emplace_back(message.raw().begin(), message.raw().end());
          }
        }
        if (connection.framer().bufferedBytes() != 0 || !connection.isUp()) {
          ::close(fds[1]);
          return fail("sequence {} chunking {}: framer left {} bytes", sequence, chunking,
                      connection.framer().bufferedBytes());
        }
      }
      ::close(fds[1]);
      if (got != expected) {
        return fail("sequence {} chunking {}: {} frames vs {} expected", sequence, chunking, got.size(),
                    expected.size());
      }
      deliveries += got.size();
    }
    core.dispatcher.runOnePass(std::chrono::milliseconds(0));
  }

  auto elapsed = secondsSince(start);
  if (elapsed >= 10.0) {
    return fail("took {:.2f} s", elapsed);
  }
  return pass(fmt::format("10000 chunkings, {} packets delivered, {:.2f} s", deliveries, elapsed));
}

Outcome
lpmOracle()
{
  auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> routeCount(0, 100);
  std::uniform_int_distribution<std::size_t> depth(0, 6);
  std::uniform_int_distribution<std::size_t> lookupDepth(0, 8);
  std::uniform_int_distribution<int> letter(0, 3);
  std::uniform_int_distribution<std::uint32_t> nexthop(1, 16);
  auto randomName = [&] (std::size_t n) {
    Name name;
    for (std::size_t i = 0; i < n; ++i) {
      name.append(std::string(1, static_cast<char>('a' + letter(rng))));
    }
    return name;
  };

  std::size_t hits = 0;
  for (int table = 0; table < 500; ++table) {
    Fib fib;
    std::map<Name, ConnectionIdSet> model;
    for (int r = routeCount(rng); r > 0; --r) {
      auto prefix = randomName(depth(rng));
      ConnectionId id{nexthop(rng)};
      fib.addRoute(prefix, id, 1);
      model[prefix].insert(id);
    }
    std::vector<std::pair<Name, ConnectionIdSet>> routes(model.begin(), model.end());
    for (int q = 0; q < 100; ++q) {
      auto name = randomName(lookupDepth(rng));
      auto expected = bruteForceLpm(routes, name);
      if (fib.lookup(name) != expected) {
        return fail("table {} lookup {} differs", table, name.toUri());
      }
      hits += expected.empty() ? 0 : 1;
    }
  }

  auto elapsed = secondsSince(start);
  if (elapsed >= 10.0) {
    return fail("took {:.2f} s", elapsed);
  }
  return pass(fmt::format("50000 lookups, {} matched a route, {:.2f} s", hits, elapsed));
}

Outcome
lruOracle()
{
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> op(0, 1);
  std::uniform_int_distribution<int> nameIndex(0, 11);
  std::size_t hits = 0;
  std::size_t zeroCapacityMatches = 0;

  for (int sequence = 0; sequence < 1000; ++sequence) {
    std::vector<std::pair<bool, int>> steps;
    for (int i = 0; i < 200; ++i) {
      steps.emplace_back(op(rng) == 0, nameIndex(rng));
    }
    for (std::size_t capacity : {1u, 2u, 8u, 0u}) {
      LruContentStore store(capacity);
      ReferenceLru model(capacity);
      for (std::size_t i = 0; i < steps.size(); ++i) {
        auto [isPut, index] = steps[i];
        Name name{"n", std::to_string(index)};
        if (isPut) {
          auto payload = std::to_string(i);
          store.putContent(parseMessage(encodeContentObject(name, payload), ConnectionId{1}, 0), 0);
          model.put(name, payload);
        }
        else {
          auto got = store.matchInterest(parseMessage(encodeInterest(name, 1), ConnectionId{1}, 0));
          auto expected = model.match(name);
          if (got.has_value() != expected.has_value() ||
              (got && std::string(got->payloadAsString()) != *expected)) {
            return fail("sequence {} capacity {} step {}: match disagrees", sequence, capacity, i);
          }
          if (capacity == 0) {
            ++zeroCapacityMatches;
            if (got) {
              return fail("capacity 0 produced a hit");
            }
          }
          hits += got ? 1 : 0;
        }
        if (store.namesByRecency() != model.names() || store.objectCount() > capacity) {
          return fail("sequence {} capacity {} step {}: contents disagree", sequence, capacity, i);
        }
      }
    }
  }
  return pass(fmt::format("800000 steps, {} hits, {} zero-capacity misses", hits, zeroCapacityMatches));
}

Outcome
messengerDeferral()
{
  Dispatcher dispatcher;
  Messenger messenger(dispatcher);
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> chainLength(1, 30);

  int depth = 0;
  int maxDepth = 0;
  int passNumber = 0;
  std::map<std::uint32_t, int> sentInPass;
  std::map<std::uint32_t, int> remaining;
  std::map<std::uint32_t, int> deliveries;
  std::uint32_t nextId = 1;
  bool deliveredTooEarly = false;

  auto onMissive = [&] (const Missive& missive) {
    ++depth;
    maxDepth = std::max(maxDepth, depth);
    auto id = toUnsigned(missive.connectionId);
    ++deliveries[id];
    if (sentInPass[id] >= passNumber) {
      deliveredTooEarly = true;
    }
    if (remaining[id] > 0) {
      auto child = nextId++;
      remaining[child] = remaining[id] - 1;
      remaining[id] = 0;
      sentInPass[child] = passNumber;
      messenger.send({MissiveType::Up, ConnectionId{child}});
      // the child must not have arrived while we are still inside the callback
      if (deliveries.count(child) != 0) {
        deliveredTooEarly = true;
      }
    }
    --depth;
  };
  CallbackRecipient first(onMissive);
  CallbackRecipient second([&] (const Missive&) {
    ++depth;
    maxDepth = std::max(maxDepth, depth);
    --depth;
  });
  messenger.registerRecipient(first);
  messenger.registerRecipient(second);

  for (int chain = 0; chain < 100; ++chain) {
    auto id = nextId++;
    remaining[id] = chainLength(rng);
    sentInPass[id] = passNumber;
    messenger.send({MissiveType::Create, ConnectionId{id}});
  }
  for (int i = 0; i < 40; ++i) {
    ++passNumber;
    dispatcher.runOnePass(std::chrono::milliseconds(0));
  }

  if (maxDepth != 1) {
    return fail("callback nesting depth reached {}", maxDepth);
  }
  if (deliveredTooEarly) {
    return fail("a missive was delivered during the pass that sent it");
  }
  for (std::uint32_t id = 1; id < nextId; ++id) {
    if (deliveries[id] != 1) {
      return fail("missive {} delivered {} times", id, deliveries[id]);
    }
  }
  return pass(fmt::format("{} missives, nesting depth 1", nextId - 1));
}

} // namespace metis::acceptance
