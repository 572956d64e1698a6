#ifndef METIS_TESTS_TEST_HELPERS_HPP
#define METIS_TESTS_TEST_HELPERS_HPP

#include "metis/core/dispatcher.hpp"
#include "metis/core/logger.hpp"
#include "metis/core/messenger.hpp"
#include "metis/io/connection.hpp"
#include "metis/wirefmt/packet.hpp"

#include <chrono>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <vector>

namespace metis::tests {

/// Manually advanced clock.
class FakeClock
{
public:
  Ticks
  now() const noexcept
  {
    return *m_now;
  }

  void
  advance(Ticks delta) noexcept
  {
    *m_now += delta;
  }

  void
  set(Ticks value) noexcept
  {
    *m_now = value;
  }

  Clock
  clock() const
  {
    return [now = m_now] { return *now; };
  }

private:
  std::shared_ptr<Ticks> m_now = std::make_shared<Ticks>(1000);
};

/// Dispatcher, messenger, and a silent logger.
struct CoreFixture
{
  explicit
  CoreFixture(Clock clock = monotonicNow)
    : dispatcher(std::move(clock))
    , messenger(dispatcher)
    , context{dispatcher, messenger, logger, nullptr, nullptr, true}
  {
    logger.setStream(logStream);
    logger.setAllLevels(LogLevel::Off);
  }

  /// Runs passes until @p done returns true or @p timeout expires.
  bool
  runUntil(const std::function<bool()>& done,
           std::chrono::milliseconds timeout = std::chrono::milliseconds(3000))
  {
    auto deadline = std::chrono::steady_clock::now() + timeout;
    while (!done()) {
      if (std::chrono::steady_clock::now() > deadline) {
        return false;
      }
      dispatcher.runOnePass(std::chrono::milliseconds(5));
    }
    return true;
  }

  std::ostringstream logStream;
  Logger logger;
  Dispatcher dispatcher;
  Messenger messenger;
  ConnectionContext context;
};

/// In-memory connection that records what it is asked to send.
class FakeConnection final : public Connection
{
public:
  FakeConnection(ConnectionContext& context, ConnectionId id, AddressPair pair,
                 ConnectionKind kind = ConnectionKind::Udp)
    : Connection(context, id, std::move(pair), kind)
  {
  }

  bool
  send(const Message& message) override
  {
    if (!isUp()) {
      return false;
    }
    sent.push_back(message);
    return true;
  }

  void
  goUp()
  {
    transitionTo(ConnectionState::Up);
  }

  void
  goDown()
  {
    transitionTo(ConnectionState::Down);
  }

  std::vector<Message> sent;
};

/// Address pair whose remote is on loopback (local) or in TEST-NET (remote).
AddressPair
testPair(std::uint16_t remotePort, bool local);

/// Random name over a small alphabet, so prefixes collide often.
Name
randomName(std::mt19937& rng, std::size_t maxDepth, int alphabet);

Message
makeInterest(const Name& name, ConnectionId ingress, std::uint8_t hopLimit = 64);

Message
makeObject(const Name& name, ConnectionId ingress, std::string_view payload = "data");

} // namespace metis::tests

#endif // METIS_TESTS_TEST_HELPERS_HPP
