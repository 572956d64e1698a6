#include "metis/core/dispatcher.hpp"

#include <cerrno>
#include <fcntl.h>
#include <poll.h>
#include <system_error>
#include <unistd.h>

namespace metis {

Ticks
monotonicNow()
{
  using namespace std::chrono;
  return static_cast<Ticks>(duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count());
}

void
TimerHandle::cancel() noexcept
{
  if (m_state) {
    m_state->cancelled = true;
  }
}

bool
TimerHandle::isPending() const noexcept
{
  return m_state && !m_state->cancelled && !m_state->fired;
}

Dispatcher::Dispatcher(Clock clock)
  : m_clock(std::move(clock))
{
  int fds[2];
  if (::pipe2(fds, O_NONBLOCK | O_CLOEXEC) != 0) {
    throw std::system_error(errno, std::generic_category(), "dispatcher wake pipe");
  }
  m_wakeRead = fds[0];
  m_wakeWrite = fds[1];
}

Dispatcher::~Dispatcher()
{
  ::close(m_wakeRead);
  ::close(m_wakeWrite);
}

TimerHandle
Dispatcher::scheduleTimer(Ticks delay, Callback callback)
{
  auto state = std::make_shared<TimerHandle::State>();
  m_timers.emplace(TimerKey{now() + delay, m_timerSeq++}, Timer{state, std::move(callback)});
  return TimerHandle(std::move(state));
}

void
Dispatcher::post(Callback task)
{
  m_tasks.push_back(std::move(task));
}

void
Dispatcher::setReadHandler(int fd, Callback handler)
{
  m_handlers[fd].onRead = std::move(handler);
}

void
Dispatcher::setWriteHandler(int fd, Callback handler)
{
  m_handlers[fd].onWrite = std::move(handler);
}

void
Dispatcher::clearReadHandler(int fd)
{
  auto it = m_handlers.find(fd);
  if (it == m_handlers.end()) {
    return;
  }
  it->second.onRead = nullptr;
  if (!it->second.onWrite) {
    m_handlers.erase(it);
  }
}

void
Dispatcher::clearWriteHandler(int fd)
{
  auto it = m_handlers.find(fd);
  if (it == m_handlers.end()) {
    return;
  }
  it->second.onWrite = nullptr;
  if (!it->second.onRead) {
    m_handlers.erase(it);
  }
}

void
Dispatcher::removeDescriptor(int fd)
{
  m_handlers.erase(fd);
}

bool
Dispatcher::hasImmediateWork()
{
  if (!m_tasks.empty() || m_hasInjected.load()) {
    return true;
  }
  for (const auto& [key, timer] : m_timers) {
    if (timer.state->cancelled) {
      continue;
    }
    return key.first <= now();
  }
  return false;
}

void
Dispatcher::runOnePass(std::chrono::milliseconds maxWait)
{
  ++m_passes;

  auto timeout = maxWait;
  if (hasImmediateWork()) {
    timeout = std::chrono::milliseconds(0);
  }
  else {
    for (const auto& [key, timer] : m_timers) {
      if (timer.state->cancelled) {
        continue;
      }
      auto untilDue = std::chrono::milliseconds(key.first - now());
      timeout = std::min(timeout, untilDue);
      break;
    }
  }

  pollDescriptors(timeout);
  drainInjected();
  fireDueTimers();
  drainTasks();
}

void
Dispatcher::runUntil(const std::function<bool()>& stopCondition, std::chrono::milliseconds maxWaitPerPass)
{
  while (!m_stopRequested && !stopCondition()) {
    runOnePass(maxWaitPerPass);
  }
  m_stopRequested = false;
}

void
Dispatcher::pollDescriptors(std::chrono::milliseconds timeout)
{
  std::vector<pollfd> fds;
  fds.reserve(m_handlers.size() + 1);
  fds.push_back(pollfd{m_wakeRead, POLLIN, 0});
  for (const auto& [fd, handlers] : m_handlers) {
    short events = 0;
    if (handlers.onRead) {
      events |= POLLIN;
    }
    if (handlers.onWrite) {
      events |= POLLOUT;
    }
    fds.push_back(pollfd{fd, events, 0});
  }

  int ready = ::poll(fds.data(), fds.size(), static_cast<int>(timeout.count()));
  if (ready < 0) {
    if (errno == EINTR) {
      return;
    }
    throw std::system_error(errno, std::generic_category(), "poll");
  }
  if (ready == 0) {
    return;
  }

  if (fds[0].revents != 0) {
    char drain[64];
    while (::read(m_wakeRead, drain, sizeof(drain)) > 0) {
    }
  }

  // Handlers may add or remove descriptors, so re-resolve each one before calling.
  for (std::size_t i = 1; i < fds.size(); ++i) {
    const auto& pfd = fds[i];
    if (pfd.revents == 0) {
      continue;
    }
    bool readable = pfd.revents & (POLLIN | POLLHUP | POLLERR);
    bool writable = pfd.revents & (POLLOUT | POLLHUP | POLLERR);

    if (readable) {
      auto it = m_handlers.find(pfd.fd);
      if (it != m_handlers.end() && it->second.onRead) {
        auto handler = it->second.onRead;
        handler();
      }
    }
    if (writable) {
      auto it = m_handlers.find(pfd.fd);
      if (it != m_handlers.end() && it->second.onWrite) {
        auto handler = it->second.onWrite;
        handler();
      }
    }
  }
}

void
Dispatcher::fireDueTimers()
{
  // Only timers that exist when the phase starts are eligible.
  const auto seqLimit = m_timerSeq;
  const auto current = now();

  std::vector<Timer> due;
  for (auto it = m_timers.begin(); it != m_timers.end() && it->first.first <= current;) {
    if (it->first.second >= seqLimit) {
      ++it;
      continue;
    }
    due.push_back(std::move(it->second));
    it = m_timers.erase(it);
  }

  for (auto& timer : due) {
    if (timer.state->cancelled) {
      continue;
    }
    timer.state->fired = true;
    timer.callback();
  }

  // drop cancelled timers at the head so they don't shorten poll timeouts
  while (!m_timers.empty() && m_timers.begin()->second.state->cancelled) {
    m_timers.erase(m_timers.begin());
  }
}

void
Dispatcher::drainTasks()
{
  std::deque<Callback> snapshot;
  snapshot.swap(m_tasks);
  for (auto& task : snapshot) {
    task();
  }
}

void
Dispatcher::drainInjected()
{
  if (!m_hasInjected.load()) {
    return;
  }
  std::vector<Callback> injected;
  {
    std::lock_guard<std::mutex> lock(m_injectMutex);
    injected.swap(m_injected);
    m_hasInjected = false;
  }
  for (auto& task : injected) {
    task();
  }
}

void
Dispatcher::wake() noexcept
{
  char byte = 1;
  [[maybe_unused]] auto n = ::write(m_wakeWrite, &byte, 1);
}

void
Dispatcher::interrupt() noexcept
{
  m_stopRequested = true;
  wake();
}

void
Dispatcher::inject(Callback task)
{
  {
    std::lock_guard<std::mutex> lock(m_injectMutex);
    m_injected.push_back(std::move(task));
    m_hasInjected = true;
  }
  wake();
}

} // namespace metis
