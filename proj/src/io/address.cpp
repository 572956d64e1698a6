#include "metis/io/address.hpp"
#include "metis/io/io-error.hpp"

#include <arpa/inet.h>
#include <cstring>
#include <fmt/format.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/un.h>

namespace metis {

const char*
toString(IoErrorCode code) noexcept
{
  switch (code) {
    case IoErrorCode::BadAddress:
      return "BadAddress";
    case IoErrorCode::BindFailed:
      return "BindFailed";
    case IoErrorCode::NoListener:
      return "NoListener";
    case IoErrorCode::SymbolicTaken:
      return "SymbolicTaken";
    case IoErrorCode::ConnectionExists:
      return "ConnectionExists";
    case IoErrorCode::ConnectFailed:
      return "ConnectFailed";
    case IoErrorCode::SocketError:
      return "SocketError";
  }
  return "Unknown";
}

std::optional<Address>
Address::fromIp(std::string_view ip, std::uint16_t port)
{
  std::string text(ip);

  Inet4Endpoint v4;
  v4.port = port;
  if (::inet_pton(AF_INET, text.c_str(), v4.address.data()) == 1) {
    return Address(v4);
  }

  Inet6Endpoint v6;
  v6.port = port;
  auto percent = text.find('%');
  std::string host = text.substr(0, percent);
  if (::inet_pton(AF_INET6, host.c_str(), v6.address.data()) == 1) {
    if (percent != std::string::npos) {
      try {
        v6.scopeId = static_cast<std::uint32_t>(std::stoul(text.substr(percent + 1)));
      }
      catch (const std::exception&) {
        return std::nullopt;
      }
    }
    return Address(v6);
  }
  return std::nullopt;
}

Address
Address::resolve(const std::string& host, std::uint16_t port)
{
  if (auto literal = fromIp(host, port)) {
    return *literal;
  }

  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  addrinfo* results = nullptr;
  int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &results);
  if (rc != 0 || results == nullptr) {
    throw IoError(IoErrorCode::BadAddress,
                  fmt::format("cannot resolve '{}': {}", host, ::gai_strerror(rc)));
  }

  std::optional<Address> resolved;
  for (auto* ai = results; ai != nullptr && !resolved; ai = ai->ai_next) {
    resolved = fromSockaddr(ai->ai_addr, ai->ai_addrlen);
  }
  ::freeaddrinfo(results);
  if (!resolved) {
    throw IoError(IoErrorCode::BadAddress, fmt::format("no usable address for '{}'", host));
  }

  std::visit([port] (auto& endpoint) {
    if constexpr (!std::is_same_v<std::decay_t<decltype(endpoint)>, LocalEndpoint>) {
      endpoint.port = port;
    }
  }, resolved->m_value);
  return *resolved;
}

std::optional<Address>
Address::fromSockaddr(const sockaddr* sa, socklen_t length)
{
  if (sa == nullptr) {
    return std::nullopt;
  }
  switch (sa->sa_family) {
    case AF_INET: {
      if (length < static_cast<socklen_t>(sizeof(sockaddr_in))) {
        return std::nullopt;
      }
      sockaddr_in sin;
      std::memcpy(&sin, sa, sizeof(sin));
      Inet4Endpoint v4;
      std::memcpy(v4.address.data(), &sin.sin_addr, 4);
      v4.port = ntohs(sin.sin_port);
      return Address(v4);
    }
    case AF_INET6: {
      if (length < static_cast<socklen_t>(sizeof(sockaddr_in6))) {
        return std::nullopt;
      }
      sockaddr_in6 sin6;
      std::memcpy(&sin6, sa, sizeof(sin6));
      Inet6Endpoint v6;
      std::memcpy(v6.address.data(), &sin6.sin6_addr, 16);
      v6.port = ntohs(sin6.sin6_port);
      v6.scopeId = sin6.sin6_scope_id;
      return Address(v6);
    }
    case AF_UNIX: {
      sockaddr_un sun{};
      std::memcpy(&sun, sa, std::min<std::size_t>(length, sizeof(sun)));
      auto pathBytes = length > offsetof(sockaddr_un, sun_path) ? length - offsetof(sockaddr_un, sun_path) : 0;
      std::string path(sun.sun_path, ::strnlen(sun.sun_path, pathBytes));
      return Address(LocalEndpoint{path});
    }
    default:
      return std::nullopt;
  }
}

socklen_t
Address::toSockaddr(sockaddr_storage& storage) const
{
  std::memset(&storage, 0, sizeof(storage));
  return std::visit([&storage] (const auto& endpoint) -> socklen_t {
    using T = std::decay_t<decltype(endpoint)>;
    if constexpr (std::is_same_v<T, Inet4Endpoint>) {
      auto* sin = reinterpret_cast<sockaddr_in*>(&storage);
      sin->sin_family = AF_INET;
      sin->sin_port = htons(endpoint.port);
      std::memcpy(&sin->sin_addr, endpoint.address.data(), 4);
      return sizeof(sockaddr_in);
    }
    else if constexpr (std::is_same_v<T, Inet6Endpoint>) {
      auto* sin6 = reinterpret_cast<sockaddr_in6*>(&storage);
      sin6->sin6_family = AF_INET6;
      sin6->sin6_port = htons(endpoint.port);
      sin6->sin6_scope_id = endpoint.scopeId;
      std::memcpy(&sin6->sin6_addr, endpoint.address.data(), 16);
      return sizeof(sockaddr_in6);
    }
    else {
      auto* sun = reinterpret_cast<sockaddr_un*>(&storage);
      sun->sun_family = AF_UNIX;
      if (endpoint.path.size() >= sizeof(sun->sun_path)) {
        throw IoError(IoErrorCode::BadAddress, "unix socket path too long: " + endpoint.path);
      }
      std::memcpy(sun->sun_path, endpoint.path.c_str(), endpoint.path.size() + 1);
      return static_cast<socklen_t>(offsetof(sockaddr_un, sun_path) + endpoint.path.size() + 1);
    }
  }, m_value);
}

int
Address::family() const noexcept
{
  switch (m_value.index()) {
    case 0:
      return AF_INET;
    case 1:
      return AF_INET6;
    default:
      return AF_UNIX;
  }
}

std::uint16_t
Address::port() const noexcept
{
  if (auto* v4 = std::get_if<Inet4Endpoint>(&m_value)) {
    return v4->port;
  }
  if (auto* v6 = std::get_if<Inet6Endpoint>(&m_value)) {
    return v6->port;
  }
  return 0;
}

bool
Address::isLoopback() const noexcept
{
  if (auto* v4 = std::get_if<Inet4Endpoint>(&m_value)) {
    return v4->address[0] == 127;
  }
  if (auto* v6 = std::get_if<Inet6Endpoint>(&m_value)) {
    static constexpr std::array<std::uint8_t, 16> loopback{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1};
    static constexpr std::array<std::uint8_t, 12> mappedPrefix{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0xFF, 0xFF};
    if (v6->address == loopback) {
      return true;
    }
    return std::equal(mappedPrefix.begin(), mappedPrefix.end(), v6->address.begin()) && v6->address[12] == 127;
  }
  return false;
}

bool
Address::isWildcard() const noexcept
{
  if (auto* v4 = std::get_if<Inet4Endpoint>(&m_value)) {
    return v4->address == std::array<std::uint8_t, 4>{};
  }
  if (auto* v6 = std::get_if<Inet6Endpoint>(&m_value)) {
    return v6->address == std::array<std::uint8_t, 16>{};
  }
  return false;
}

std::string
Address::hostString() const
{
  char buffer[INET6_ADDRSTRLEN] = {};
  if (auto* v4 = std::get_if<Inet4Endpoint>(&m_value)) {
    ::inet_ntop(AF_INET, v4->address.data(), buffer, sizeof(buffer));
    return buffer;
  }
  if (auto* v6 = std::get_if<Inet6Endpoint>(&m_value)) {
    ::inet_ntop(AF_INET6, v6->address.data(), buffer, sizeof(buffer));
    return buffer;
  }
  return std::get<LocalEndpoint>(m_value).path;
}

std::string
Address::toString() const
{
  if (auto* v4 = std::get_if<Inet4Endpoint>(&m_value)) {
    return fmt::format("inet4://{}:{}", hostString(), v4->port);
  }
  if (auto* v6 = std::get_if<Inet6Endpoint>(&m_value)) {
    return fmt::format("inet6://[{}%{}]:{}", hostString(), v6->scopeId, v6->port);
  }
  return "local://" + hostString();
}

} // namespace metis
