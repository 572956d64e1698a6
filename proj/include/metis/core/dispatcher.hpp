#ifndef METIS_CORE_DISPATCHER_HPP
#define METIS_CORE_DISPATCHER_HPP

#include "metis/common.hpp"

#include <atomic>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace metis {

class TimerHandle
{
public:
  TimerHandle() = default;

  /// Prevents the callback from ever running. Safe to call repeatedly or after
  /// the timer fired.
  void
  cancel() noexcept;

  bool
  isPending() const noexcept;

private:
  friend class Dispatcher;

  struct State
  {
    bool cancelled = false;
    bool fired = false;
  };

  explicit
  TimerHandle(std::shared_ptr<State> state)
    : m_state(std::move(state))
  {
  }

  std::shared_ptr<State> m_state;
};

/**
 * Single-threaded, non-preemptive event dispatcher.
 *
 * One pass polls registered descriptors (invoking ready handlers), fires due
 * timers, then drains a snapshot of the deferred task queue. Work deferred
 * while a pass is draining waits for the next pass.
 *
 * Only interrupt() and inject() may be called from another thread.
 */
class Dispatcher
{
public:
  using Callback = std::function<void()>;

  explicit
  Dispatcher(Clock clock = monotonicNow);

  ~Dispatcher();

  Dispatcher(const Dispatcher&) = delete;
  Dispatcher& operator=(const Dispatcher&) = delete;

  Ticks
  now() const
  {
    return m_clock();
  }

  /// The callback runs once on the first pass whose time is >= now() + delay.
  /// It never runs inline.
  TimerHandle
  scheduleTimer(Ticks delay, Callback callback);

  /// Defers @p task to the drain phase of the current or next pass.
  void
  post(Callback task);

  void
  setReadHandler(int fd, Callback handler);

  void
  setWriteHandler(int fd, Callback handler);

  void
  clearReadHandler(int fd);

  void
  clearWriteHandler(int fd);

  /// Drops both handlers for @p fd.
  void
  removeDescriptor(int fd);

  /// Runs a single pass, blocking in poll for at most @p maxWait when there is
  /// nothing immediately runnable.
  void
  runOnePass(std::chrono::milliseconds maxWait = std::chrono::milliseconds(0));

  /// Runs passes until @p stopCondition returns true (checked before each pass)
  /// or stop()/interrupt() is called.
  void
  runUntil(const std::function<bool()>& stopCondition,
           std::chrono::milliseconds maxWaitPerPass = std::chrono::milliseconds(50));

  void
  run()
  {
    runUntil([] { return false; }, std::chrono::milliseconds(1000));
  }

  void
  stop() noexcept
  {
    m_stopRequested = true;
  }

  /// Async-signal-safe and thread-safe: requests the loop to stop and wakes it.
  void
  interrupt() noexcept;

  /// Thread-safe: queues @p task to run on the dispatcher thread.
  void
  inject(Callback task);

  std::uint64_t
  passCount() const noexcept
  {
    return m_passes;
  }

private:
  struct Handlers
  {
    Callback onRead;
    Callback onWrite;
  };

  struct Timer
  {
    std::shared_ptr<TimerHandle::State> state;
    Callback callback;
  };

  using TimerKey = std::pair<Ticks, std::uint64_t>;

  void
  pollDescriptors(std::chrono::milliseconds timeout);

  void
  fireDueTimers();

  void
  drainTasks();

  void
  drainInjected();

  void
  wake() noexcept;

  bool
  hasImmediateWork();

private:
  Clock m_clock;
  std::unordered_map<int, Handlers> m_handlers;
  std::map<TimerKey, Timer> m_timers;
  std::uint64_t m_timerSeq = 0;
  std::deque<Callback> m_tasks;
  std::uint64_t m_passes = 0;

  std::atomic<bool> m_stopRequested{false};
  int m_wakeRead = -1;
  int m_wakeWrite = -1;

  std::mutex m_injectMutex;
  std::vector<Callback> m_injected;
  std::atomic<bool> m_hasInjected{false};
};

} // namespace metis

#endif // METIS_CORE_DISPATCHER_HPP
