#ifndef METIS_CORE_MESSENGER_HPP
#define METIS_CORE_MESSENGER_HPP

#include "metis/common.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace metis {

class Dispatcher;

/// Connection lifecycle events, one per state of the connection state machine.
enum class MissiveType {
  Create,
  Up,
  Down,
  Closed,
  Destroyed,
};

const char*
toString(MissiveType type) noexcept;

struct Missive
{
  MissiveType type;
  ConnectionId connectionId;

  friend bool
  operator==(const Missive&, const Missive&) = default;
};

class MessengerRecipient
{
public:
  virtual
  ~MessengerRecipient() = default;

  virtual void
  onMissive(const Missive& missive) = 0;
};

/// Adapts a callable to MessengerRecipient; identity is the adapter's address.
class CallbackRecipient final : public MessengerRecipient
{
public:
  explicit
  CallbackRecipient(std::function<void(const Missive&)> callback)
    : m_callback(std::move(callback))
  {
  }

  void
  onMissive(const Missive& missive) override
  {
    m_callback(missive);
  }

private:
  std::function<void(const Missive&)> m_callback;
};

/**
 * Broadcasts Missives to registered recipients in a later dispatcher pass.
 *
 * send() never calls a recipient inline, so a recipient may send from within
 * its own callback without re-entrancy. Each recipient sees missives in send
 * order.
 */
class Messenger
{
public:
  explicit
  Messenger(Dispatcher& dispatcher);

  ~Messenger();

  Messenger(const Messenger&) = delete;
  Messenger& operator=(const Messenger&) = delete;

  /// Registering an already registered recipient is a no-op.
  void
  registerRecipient(MessengerRecipient& recipient);

  /// Unregistering an unknown recipient is a no-op.
  void
  unregisterRecipient(MessengerRecipient& recipient);

  void
  send(const Missive& missive);

  std::size_t
  recipientCount() const noexcept
  {
    return m_recipients.size();
  }

private:
  void
  deliver();

  bool
  isRegistered(const MessengerRecipient* recipient) const;

private:
  Dispatcher& m_dispatcher;
  std::vector<MessengerRecipient*> m_recipients;
  std::vector<Missive> m_queue;
  bool m_deliveryScheduled = false;
  std::shared_ptr<bool> m_alive = std::make_shared<bool>(true);
};

} // namespace metis

#endif // METIS_CORE_MESSENGER_HPP
