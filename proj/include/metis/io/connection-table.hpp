#ifndef METIS_IO_CONNECTION_TABLE_HPP
#define METIS_IO_CONNECTION_TABLE_HPP

#include "metis/io/connection.hpp"

#include <map>
#include <memory>
#include <string_view>
#include <vector>

namespace metis {

/**
 * Every connection known to the forwarder, indexed by id and by address pair.
 *
 * Other tables hold ids only. A removed id simply stops resolving, and callers
 * treat a failed lookup as "drop this hop".
 */
class ConnectionTable
{
public:
  ConnectionTable() = default;

  ConnectionTable(const ConnectionTable&) = delete;
  ConnectionTable& operator=(const ConnectionTable&) = delete;

  ~ConnectionTable();

  /// Ids increase monotonically and are never reused.
  ConnectionId
  allocateId() noexcept
  {
    return ConnectionId{m_nextId++};
  }

  /// Throws std::invalid_argument if the id or the address pair is already indexed.
  void
  add(std::shared_ptr<Connection> connection);

  std::shared_ptr<Connection>
  findById(ConnectionId id) const;

  std::shared_ptr<Connection>
  findByPair(const AddressPair& pair) const;

  std::shared_ptr<Connection>
  findBySymbolic(std::string_view symbolic) const;

  /// Drops both indexes and destroys the connection. False if the id is unknown.
  bool
  remove(ConnectionId id);

  /// Destroys every connection.
  void
  clear();

  /// Sorted by id.
  std::vector<std::shared_ptr<Connection>>
  list() const;

  std::size_t
  size() const noexcept
  {
    return m_byId.size();
  }

private:
  std::uint32_t m_nextId = 1;
  std::map<ConnectionId, std::shared_ptr<Connection>> m_byId;
  std::map<AddressPair, ConnectionId> m_byPair;
};

} // namespace metis

#endif // METIS_IO_CONNECTION_TABLE_HPP
