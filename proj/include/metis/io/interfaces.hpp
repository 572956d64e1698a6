#ifndef METIS_IO_INTERFACES_HPP
#define METIS_IO_INTERFACES_HPP

#include "metis/io/address.hpp"

#include <string>
#include <vector>

namespace metis {

struct InterfaceInfo
{
  unsigned index = 0;
  std::string name;
  bool loopback = false;
  bool multicast = false;
  unsigned mtu = 0;
  /// Rendered addresses: link://aa-bb-..., inet4://a.b.c.d:0, inet6://[addr%scope]:0
  std::vector<std::string> addresses;
};

class InterfaceProvider
{
public:
  virtual
  ~InterfaceProvider() = default;

  virtual std::vector<InterfaceInfo>
  interfaces() const = 0;
};

/// Enumerates host interfaces with getifaddrs(3).
class SystemInterfaceProvider final : public InterfaceProvider
{
public:
  std::vector<InterfaceInfo>
  interfaces() const override;
};

/// Index of the interface carrying @p address; 0 for wildcard, Unix, or unknown.
unsigned
interfaceIndexFor(const Address& address);

} // namespace metis

#endif // METIS_IO_INTERFACES_HPP
