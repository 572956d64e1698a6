#ifndef METIS_IO_ADDRESS_HPP
#define METIS_IO_ADDRESS_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <sys/socket.h>
#include <variant>

namespace metis {

struct Inet4Endpoint
{
  std::array<std::uint8_t, 4> address{};
  std::uint16_t port = 0;

  friend auto
  operator<=>(const Inet4Endpoint&, const Inet4Endpoint&) = default;
};

struct Inet6Endpoint
{
  std::array<std::uint8_t, 16> address{};
  std::uint16_t port = 0;
  std::uint32_t scopeId = 0;

  friend auto
  operator<=>(const Inet6Endpoint&, const Inet6Endpoint&) = default;
};

struct LocalEndpoint
{
  std::string path;

  friend auto
  operator<=>(const LocalEndpoint&, const LocalEndpoint&) = default;
};

/**
 * A socket address: IPv4, IPv6, or a Unix-domain path.
 *
 * Rendered as inet4://a.b.c.d:port, inet6://[addr%scope]:port, or local://path.
 */
class Address
{
public:
  using Value = std::variant<Inet4Endpoint, Inet6Endpoint, LocalEndpoint>;

  Address() = default;

  Address(Value value)
    : m_value(std::move(value))
  {
  }

  /// Numeric IPv4/IPv6 literal only; nullopt if @p ip is not one.
  static std::optional<Address>
  fromIp(std::string_view ip, std::uint16_t port);

  /// Numeric literal or hostname (first result of getaddrinfo). Throws IoError(BadAddress).
  static Address
  resolve(const std::string& host, std::uint16_t port);

  static Address
  local(std::string path)
  {
    return Address(LocalEndpoint{std::move(path)});
  }

  static std::optional<Address>
  fromSockaddr(const sockaddr* sa, socklen_t length);

  /// Fills @p storage and returns the used length.
  socklen_t
  toSockaddr(sockaddr_storage& storage) const;

  int
  family() const noexcept;

  std::uint16_t
  port() const noexcept;

  bool
  isLoopback() const noexcept;

  bool
  isWildcard() const noexcept;

  bool
  isLocalPath() const noexcept
  {
    return std::holds_alternative<LocalEndpoint>(m_value);
  }

  /// Host part without scheme or port, e.g. "127.0.0.1", "::1", or the path.
  std::string
  hostString() const;

  std::string
  toString() const;

  const Value&
  value() const noexcept
  {
    return m_value;
  }

  friend auto
  operator<=>(const Address&, const Address&) = default;

  friend bool
  operator==(const Address&, const Address&) = default;

private:
  Value m_value;
};

struct AddressPair
{
  Address local;
  Address remote;

  friend auto
  operator<=>(const AddressPair&, const AddressPair&) = default;

  friend bool
  operator==(const AddressPair&, const AddressPair&) = default;
};

} // namespace metis

#endif // METIS_IO_ADDRESS_HPP
