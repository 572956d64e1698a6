#include "metis/core/messenger.hpp"
#include "metis/core/dispatcher.hpp"

#include <algorithm>

namespace metis {

const char*
toString(MissiveType type) noexcept
{
  switch (type) {
    case MissiveType::Create:
      return "CREATE";
    case MissiveType::Up:
      return "UP";
    case MissiveType::Down:
      return "DOWN";
    case MissiveType::Closed:
      return "CLOSED";
    case MissiveType::Destroyed:
      return "DESTROYED";
  }
  return "UNKNOWN";
}

Messenger::Messenger(Dispatcher& dispatcher)
  : m_dispatcher(dispatcher)
{
}

Messenger::~Messenger()
{
  *m_alive = false;
}

void
Messenger::registerRecipient(MessengerRecipient& recipient)
{
  if (!isRegistered(&recipient)) {
    m_recipients.push_back(&recipient);
  }
}

void
Messenger::unregisterRecipient(MessengerRecipient& recipient)
{
  std::erase(m_recipients, &recipient);
}

bool
Messenger::isRegistered(const MessengerRecipient* recipient) const
{
  return std::find(m_recipients.begin(), m_recipients.end(), recipient) != m_recipients.end();
}

void
Messenger::send(const Missive& missive)
{
  m_queue.push_back(missive);
  if (m_deliveryScheduled) {
    return;
  }
  m_deliveryScheduled = true;
  m_dispatcher.post([this, alive = std::weak_ptr<bool>(m_alive)] {
    if (auto flag = alive.lock(); flag && *flag) {
      deliver();
    }
  });
}

void
Messenger::deliver()
{
  // Missives sent while delivering are queued for a later pass.
  m_deliveryScheduled = false;
  std::vector<Missive> batch;
  batch.swap(m_queue);

  auto recipients = m_recipients;
  for (const auto& missive : batch) {
    for (auto* recipient : recipients) {
      if (isRegistered(recipient)) {
        recipient->onMissive(missive);
      }
    }
  }
}

} // namespace metis
