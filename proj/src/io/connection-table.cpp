#include "metis/io/connection-table.hpp"

#include <stdexcept>

namespace metis {

ConnectionTable::~ConnectionTable()
{
  // Connections are torn down silently at shutdown; no Destroyed transitions.
  m_byPair.clear();
  m_byId.clear();
}

void
ConnectionTable::add(std::shared_ptr<Connection> connection)
{
  auto id = connection->id();
  if (m_byId.count(id) > 0) {
    throw std::invalid_argument("connection id " + toString(id) + " already in table");
  }
  if (m_byPair.count(connection->addressPair()) > 0) {
    throw std::invalid_argument("address pair " + connection->addressPair().local.toString() + " " +
                                connection->addressPair().remote.toString() + " already in table");
  }
  m_byPair.emplace(connection->addressPair(), id);
  m_byId.emplace(id, std::move(connection));
}

std::shared_ptr<Connection>
ConnectionTable::findById(ConnectionId id) const
{
  auto it = m_byId.find(id);
  return it == m_byId.end() ? nullptr : it->second;
}

std::shared_ptr<Connection>
ConnectionTable::findByPair(const AddressPair& pair) const
{
  auto it = m_byPair.find(pair);
  return it == m_byPair.end() ? nullptr : findById(it->second);
}

std::shared_ptr<Connection>
ConnectionTable::findBySymbolic(std::string_view symbolic) const
{
  for (const auto& [id, connection] : m_byId) {
    if (connection->symbolic() && *connection->symbolic() == symbolic) {
      return connection;
    }
  }
  return nullptr;
}

bool
ConnectionTable::remove(ConnectionId id)
{
  auto it = m_byId.find(id);
  if (it == m_byId.end()) {
    return false;
  }
  auto connection = std::move(it->second);
  m_byId.erase(it);
  m_byPair.erase(connection->addressPair());
  connection->destroy();
  return true;
}

void
ConnectionTable::clear()
{
  while (!m_byId.empty()) {
    remove(m_byId.begin()->first);
  }
}

std::vector<std::shared_ptr<Connection>>
ConnectionTable::list() const
{
  std::vector<std::shared_ptr<Connection>> connections;
  connections.reserve(m_byId.size());
  for (const auto& [id, connection] : m_byId) {
    connections.push_back(connection);
  }
  return connections;
}

} // namespace metis
