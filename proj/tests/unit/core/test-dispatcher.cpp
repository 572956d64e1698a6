#include "metis/core/dispatcher.hpp"

#include "../test-helpers.hpp"

#include <gtest/gtest.h>

#include <sys/socket.h>
#include <thread>
#include <unistd.h>

namespace metis::tests {
namespace {

using namespace std::chrono_literals;

TEST(Dispatcher, ZeroDelayTimerIsDeferred)
{
  FakeClock clock;
  Dispatcher dispatcher(clock.clock());
  bool fired = false;
  dispatcher.scheduleTimer(0, [&] { fired = true; });
  EXPECT_FALSE(fired);
  dispatcher.runOnePass();
  EXPECT_TRUE(fired);
}

TEST(Dispatcher, TimerFiresNoEarlierThanDeadline)
{
  FakeClock clock;
  Dispatcher dispatcher(clock.clock());
  int fired = 0;
  dispatcher.scheduleTimer(10, [&] { ++fired; });
  clock.advance(9);
  dispatcher.runOnePass();
  EXPECT_EQ(fired, 0);
  clock.advance(1);
  dispatcher.runOnePass();
  EXPECT_EQ(fired, 1);
  clock.advance(100);
  dispatcher.runOnePass();
  EXPECT_EQ(fired, 1);
}

TEST(Dispatcher, CancelledTimerNeverFires)
{
  FakeClock clock;
  Dispatcher dispatcher(clock.clock());
  bool fired = false;
  auto handle = dispatcher.scheduleTimer(10, [&] { fired = true; });
  clock.advance(5);
  dispatcher.runOnePass();
  EXPECT_TRUE(handle.isPending());
  handle.cancel();
  EXPECT_FALSE(handle.isPending());
  clock.advance(50);
  dispatcher.runOnePass();
  EXPECT_FALSE(fired);
}

TEST(Dispatcher, SameDeadlineKeepsRegistrationOrder)
{
  FakeClock clock;
  Dispatcher dispatcher(clock.clock());
  std::vector<int> order;
  for (int i = 0; i < 5; ++i) {
    dispatcher.scheduleTimer(3, [&order, i] { order.push_back(i); });
  }
  clock.advance(3);
  dispatcher.runOnePass();
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Dispatcher, EarlierTimersRunFirst)
{
  FakeClock clock;
  Dispatcher dispatcher(clock.clock());
  std::vector<int> order;
  dispatcher.scheduleTimer(30, [&] { order.push_back(30); });
  dispatcher.scheduleTimer(10, [&] { order.push_back(10); });
  dispatcher.scheduleTimer(20, [&] { order.push_back(20); });
  clock.advance(40);
  dispatcher.runOnePass();
  EXPECT_EQ(order, (std::vector<int>{10, 20, 30}));
}

TEST(Dispatcher, TimerScheduledFromTimerWaitsForNextPass)
{
  FakeClock clock;
  Dispatcher dispatcher(clock.clock());
  int inner = 0;
  dispatcher.scheduleTimer(0, [&] { dispatcher.scheduleTimer(0, [&] { ++inner; }); });
  dispatcher.runOnePass();
  EXPECT_EQ(inner, 0);
  dispatcher.runOnePass();
  EXPECT_EQ(inner, 1);
}

TEST(Dispatcher, PostedTasksRunOnCurrentPassSnapshot)
{
  Dispatcher dispatcher;
  std::vector<int> order;
  dispatcher.post([&] {
    order.push_back(1);
    dispatcher.post([&] { order.push_back(2); });
  });
  dispatcher.runOnePass();
  EXPECT_EQ(order, (std::vector<int>{1}));
  dispatcher.runOnePass();
  EXPECT_EQ(order, (std::vector<int>{1, 2}));
}

TEST(Dispatcher, IdlePassReturnsPromptly)
{
  Dispatcher dispatcher;
  auto start = std::chrono::steady_clock::now();
  dispatcher.runOnePass();
  EXPECT_LT(std::chrono::steady_clock::now() - start, 100ms);
}

TEST(Dispatcher, ReadableSocketHandledWithinOnePass)
{
  int fds[2];
  ASSERT_EQ(::socketpair(AF_UNIX, SOCK_STREAM, 0, fds), 0);
  Dispatcher dispatcher;
  int reads = 0;
  dispatcher.setReadHandler(fds[0], [&] {
    char buffer[16];
    EXPECT_EQ(::read(fds[0], buffer, sizeof(buffer)), 1);
    ++reads;
  });
  ASSERT_EQ(::write(fds[1], "x", 1), 1);
  dispatcher.runOnePass(1000ms);
  EXPECT_EQ(reads, 1);
  dispatcher.removeDescriptor(fds[0]);
  ::close(fds[0]);
  ::close(fds[1]);
}

TEST(Dispatcher, InjectFromOtherThreadWakesLoop)
{
  Dispatcher dispatcher;
  std::atomic<bool> ran = false;
  std::thread worker([&] {
    std::this_thread::sleep_for(20ms);
    dispatcher.inject([&] { ran = true; });
  });
  auto start = std::chrono::steady_clock::now();
  dispatcher.runUntil([&] { return ran.load(); }, 2000ms);
  worker.join();
  EXPECT_TRUE(ran);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 1500ms);
}

TEST(Dispatcher, InterruptStopsRun)
{
  Dispatcher dispatcher;
  std::thread worker([&] {
    std::this_thread::sleep_for(20ms);
    dispatcher.interrupt();
  });
  dispatcher.run();
  worker.join();
  SUCCEED();
}

TEST(Dispatcher, StopFromCallback)
{
  Dispatcher dispatcher;
  int passes = 0;
  std::function<void()> tick = [&] {
    if (++passes == 3) {
      dispatcher.stop();
    }
    else {
      dispatcher.post(tick);
    }
  };
  dispatcher.post(tick);
  dispatcher.run();
  EXPECT_EQ(passes, 3);
}

} // namespace
} // namespace metis::tests
