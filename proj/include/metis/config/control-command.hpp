#ifndef METIS_CONFIG_CONTROL_COMMAND_HPP
#define METIS_CONFIG_CONTROL_COMMAND_HPP

#include "metis/wirefmt/name.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace metis {

enum class ListenerProtocol {
  Tcp,
  Udp,
  Local,
  Ether,
};

enum class TunnelProtocol {
  Tcp,
  Udp,
};

std::string_view
toString(ListenerProtocol protocol) noexcept;

std::string_view
toString(TunnelProtocol protocol) noexcept;

inline constexpr std::uint16_t kDefaultPort = 9695;

struct AddListenerCommand
{
  ListenerProtocol protocol = ListenerProtocol::Tcp;
  std::string symbolic;
  /// IP address, Unix socket path, or interface name, depending on protocol.
  std::string address;
  std::optional<std::uint16_t> port;
  std::optional<std::uint16_t> etherType;

  friend bool
  operator==(const AddListenerCommand&, const AddListenerCommand&) = default;
};

struct AddConnectionCommand
{
  TunnelProtocol protocol = TunnelProtocol::Tcp;
  std::string symbolic;
  std::string remoteHost;
  std::uint16_t remotePort = kDefaultPort;
  std::optional<std::string> localHost;
  std::optional<std::uint16_t> localPort;

  friend bool
  operator==(const AddConnectionCommand&, const AddConnectionCommand&) = default;
};

struct AddConnectionEtherCommand
{
  std::string symbolic;
  std::string dmac;
  std::string interface;

  friend bool
  operator==(const AddConnectionEtherCommand&, const AddConnectionEtherCommand&) = default;
};

struct AddRouteCommand
{
  /// Connection symbolic name, or a numeric connection id.
  std::string symbolic;
  Name prefix;
  std::uint32_t cost = 1;

  friend bool
  operator==(const AddRouteCommand&, const AddRouteCommand&) = default;
};

struct ListConnectionsCommand
{
  friend bool
  operator==(const ListConnectionsCommand&, const ListConnectionsCommand&) = default;
};

struct ListInterfacesCommand
{
  friend bool
  operator==(const ListInterfacesCommand&, const ListInterfacesCommand&) = default;
};

struct ListRoutesCommand
{
  friend bool
  operator==(const ListRoutesCommand&, const ListRoutesCommand&) = default;
};

struct RemoveConnectionCommand
{
  std::vector<std::string> args;

  friend bool
  operator==(const RemoveConnectionCommand&, const RemoveConnectionCommand&) = default;
};

struct RemoveRouteCommand
{
  std::vector<std::string> args;

  friend bool
  operator==(const RemoveRouteCommand&, const RemoveRouteCommand&) = default;
};

struct QuitCommand
{
  friend bool
  operator==(const QuitCommand&, const QuitCommand&) = default;
};

struct SetDebugCommand
{
  friend bool
  operator==(const SetDebugCommand&, const SetDebugCommand&) = default;
};

struct UnsetDebugCommand
{
  friend bool
  operator==(const UnsetDebugCommand&, const UnsetDebugCommand&) = default;
};

struct HelpCommand
{
  std::optional<std::string> topic;

  friend bool
  operator==(const HelpCommand&, const HelpCommand&) = default;
};

using ControlCommand = std::variant<
  AddListenerCommand,
  AddConnectionCommand,
  AddConnectionEtherCommand,
  AddRouteCommand,
  ListConnectionsCommand,
  ListInterfacesCommand,
  ListRoutesCommand,
  RemoveConnectionCommand,
  RemoveRouteCommand,
  QuitCommand,
  SetDebugCommand,
  UnsetDebugCommand,
  HelpCommand>;

class SyntaxError : public std::runtime_error
{
public:
  SyntaxError(const std::string& what, std::string token)
    : std::runtime_error(what)
    , m_token(std::move(token))
  {
  }

  /// The offending token; empty when a token is missing.
  const std::string&
  token() const noexcept
  {
    return m_token;
  }

private:
  std::string m_token;
};

/**
 * Parses one command line. Blank lines and lines starting with '#' yield
 * std::nullopt. Throws SyntaxError.
 */
std::optional<ControlCommand>
parseCommand(std::string_view line);

/// Inverse of parseCommand.
std::string
renderCommand(const ControlCommand& command);

/// Help lines for @p topic ("add", "list", ...), or the command summary.
std::vector<std::string>
helpText(const std::optional<std::string>& topic);

} // namespace metis

#endif // METIS_CONFIG_CONTROL_COMMAND_HPP
