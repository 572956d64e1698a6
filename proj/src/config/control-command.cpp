#include "metis/config/control-command.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fmt/format.h>
#include <limits>

namespace metis {

std::string_view
toString(ListenerProtocol protocol) noexcept
{
  switch (protocol) {
    case ListenerProtocol::Tcp:
      return "tcp";
    case ListenerProtocol::Udp:
      return "udp";
    case ListenerProtocol::Local:
      return "local";
    case ListenerProtocol::Ether:
      return "ether";
  }
  return "?";
}

std::string_view
toString(TunnelProtocol protocol) noexcept
{
  return protocol == TunnelProtocol::Tcp ? "tcp" : "udp";
}

namespace {

class Tokens
{
public:
  explicit
  Tokens(std::string_view line)
  {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
      }
      auto start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
      }
      if (i > start) {
        m_tokens.emplace_back(line.substr(start, i - start));
      }
    }
  }

  bool
  empty() const noexcept
  {
    return m_tokens.empty();
  }

  bool
  atEnd() const noexcept
  {
    return m_next >= m_tokens.size();
  }

  const std::string&
  expect(std::string_view what)
  {
    if (atEnd()) {
      throw SyntaxError(fmt::format("missing {}", what), "");
    }
    return m_tokens[m_next++];
  }

  std::optional<std::string>
  optional()
  {
    if (atEnd()) {
      return std::nullopt;
    }
    return m_tokens[m_next++];
  }

  /// Lower-cased keyword.
  std::string
  keyword(std::string_view what)
  {
    std::string word = expect(what);
    std::transform(word.begin(), word.end(), word.begin(),
                   [] (unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return word;
  }

  std::vector<std::string>
  rest()
  {
    std::vector<std::string> remaining(m_tokens.begin() + static_cast<std::ptrdiff_t>(m_next),
                                       m_tokens.end());
    m_next = m_tokens.size();
    return remaining;
  }

  void
  expectEnd()
  {
    if (!atEnd()) {
      throw SyntaxError(fmt::format("unexpected argument '{}'", m_tokens[m_next]), m_tokens[m_next]);
    }
  }

private:
  std::vector<std::string> m_tokens;
  std::size_t m_next = 0;
};

template<typename T>
T
parseUnsigned(const std::string& token, std::string_view what, int base = 10)
{
  T value{};
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (base == 16 && token.size() > 2 && token[0] == '0' && (token[1] == 'x' || token[1] == 'X')) {
    begin += 2;
  }
  else {
    base = 10;
  }
  auto [ptr, ec] = std::from_chars(begin, end, value, base);
  if (ec != std::errc{} || ptr != end || begin == end) {
    throw SyntaxError(fmt::format("invalid {} '{}'", what, token), token);
  }
  return value;
}

[[noreturn]] void
unknown(const std::string& token, std::string_view context)
{
  throw SyntaxError(fmt::format("unknown {} '{}' (try 'help')", context, token), token);
}

ControlCommand
parseAddListener(Tokens& tokens)
{
  AddListenerCommand command;
  auto protocol = tokens.keyword("listener protocol");
  if (protocol == "tcp" || protocol == "udp") {
    command.protocol = protocol == "tcp" ? ListenerProtocol::Tcp : ListenerProtocol::Udp;
    command.symbolic = tokens.expect("symbolic name");
    command.address = tokens.expect("ip address");
    command.port = parseUnsigned<std::uint16_t>(tokens.expect("port"), "port");
  }
  else if (protocol == "local") {
    command.protocol = ListenerProtocol::Local;
    command.symbolic = tokens.expect("symbolic name");
    command.address = tokens.expect("path");
  }
  else if (protocol == "ether") {
    command.protocol = ListenerProtocol::Ether;
    command.symbolic = tokens.expect("symbolic name");
    command.address = tokens.expect("interface name");
    command.etherType = parseUnsigned<std::uint16_t>(tokens.expect("ethertype"), "ethertype", 16);
  }
  else {
    unknown(protocol, "listener protocol");
  }
  tokens.expectEnd();
  return command;
}

ControlCommand
parseAddConnection(Tokens& tokens)
{
  auto protocol = tokens.keyword("connection protocol");
  if (protocol == "ether") {
    AddConnectionEtherCommand command;
    command.symbolic = tokens.expect("symbolic name");
    command.dmac = tokens.expect("destination mac");
    command.interface = tokens.expect("interface name");
    tokens.expectEnd();
    return command;
  }
  if (protocol != "tcp" && protocol != "udp") {
    unknown(protocol, "connection protocol");
  }

  AddConnectionCommand command;
  command.protocol = protocol == "tcp" ? TunnelProtocol::Tcp : TunnelProtocol::Udp;
  command.symbolic = tokens.expect("symbolic name");
  command.remoteHost = tokens.expect("remote address");
  if (auto port = tokens.optional()) {
    command.remotePort = parseUnsigned<std::uint16_t>(*port, "remote port");
  }
  command.localHost = tokens.optional();
  if (auto port = tokens.optional()) {
    command.localPort = parseUnsigned<std::uint16_t>(*port, "local port");
  }
  tokens.expectEnd();
  return command;
}

ControlCommand
parseAddRoute(Tokens& tokens)
{
  AddRouteCommand command;
  command.symbolic = tokens.expect("symbolic name");
  const auto& prefix = tokens.expect("prefix");
  if (!prefix.starts_with("lci:/") && !prefix.starts_with("/")) {
    throw SyntaxError(fmt::format("invalid prefix '{}', expected lci:/...", prefix), prefix);
  }
  command.prefix = Name::fromUri(prefix);
  if (auto cost = tokens.optional()) {
    command.cost = parseUnsigned<std::uint32_t>(*cost, "cost");
  }
  tokens.expectEnd();
  return command;
}

} // namespace

std::optional<ControlCommand>
parseCommand(std::string_view line)
{
  Tokens tokens(line);
  if (tokens.empty()) {
    return std::nullopt;
  }
  auto first = line.find_first_not_of(" \t\r\n\v\f");
  if (line[first] == '#') {
    return std::nullopt;
  }

  auto verb = tokens.keyword("command");
  if (verb == "add") {
    auto what = tokens.keyword("add target");
    if (what == "listener") {
      return parseAddListener(tokens);
    }
    if (what == "connection") {
      return parseAddConnection(tokens);
    }
    if (what == "route") {
      return parseAddRoute(tokens);
    }
    unknown(what, "add target");
  }
  if (verb == "list") {
    auto what = tokens.keyword("list target");
    ControlCommand command;
    if (what == "connections") {
      command = ListConnectionsCommand{};
    }
    else if (what == "interfaces") {
      command = ListInterfacesCommand{};
    }
    else if (what == "routes") {
      command = ListRoutesCommand{};
    }
    else {
      unknown(what, "list target");
    }
    tokens.expectEnd();
    return command;
  }
  if (verb == "remove") {
    auto what = tokens.keyword("remove target");
    if (what == "connection") {
      return RemoveConnectionCommand{tokens.rest()};
    }
    if (what == "route") {
      return RemoveRouteCommand{tokens.rest()};
    }
    unknown(what, "remove target");
  }
  if (verb == "set" || verb == "unset") {
    auto what = tokens.keyword("flag");
    if (what != "debug") {
      unknown(what, "flag");
    }
    tokens.expectEnd();
    if (verb == "set") {
      return SetDebugCommand{};
    }
    return UnsetDebugCommand{};
  }
  if (verb == "quit") {
    tokens.expectEnd();
    return QuitCommand{};
  }
  if (verb == "help") {
    auto words = tokens.rest();
    if (words.empty()) {
      return HelpCommand{};
    }
    return HelpCommand{fmt::format("{}", fmt::join(words, " "))};
  }
  unknown(verb, "command");
}

namespace {

struct Renderer
{
  std::string
  operator()(const AddListenerCommand& c) const
  {
    switch (c.protocol) {
      case ListenerProtocol::Tcp:
      case ListenerProtocol::Udp:
        return fmt::format("add listener {} {} {} {}", toString(c.protocol), c.symbolic, c.address,
                           c.port.value_or(kDefaultPort));
      case ListenerProtocol::Local:
        return fmt::format("add listener local {} {}", c.symbolic, c.address);
      case ListenerProtocol::Ether:
        return fmt::format("add listener ether {} {} 0x{:04x}", c.symbolic, c.address,
                           c.etherType.value_or(0));
    }
    return {};
  }

  std::string
  operator()(const AddConnectionCommand& c) const
  {
    auto line = fmt::format("add connection {} {} {} {}", toString(c.protocol), c.symbolic,
                            c.remoteHost, c.remotePort);
    if (c.localHost) {
      line += fmt::format(" {}", *c.localHost);
      if (c.localPort) {
        line += fmt::format(" {}", *c.localPort);
      }
    }
    return line;
  }

  std::string
  operator()(const AddConnectionEtherCommand& c) const
  {
    return fmt::format("add connection ether {} {} {}", c.symbolic, c.dmac, c.interface);
  }

  std::string
  operator()(const AddRouteCommand& c) const
  {
    return fmt::format("add route {} {} {}", c.symbolic, c.prefix.toUri(), c.cost);
  }

  std::string
  operator()(const ListConnectionsCommand&) const
  {
    return "list connections";
  }

  std::string
  operator()(const ListInterfacesCommand&) const
  {
    return "list interfaces";
  }

  std::string
  operator()(const ListRoutesCommand&) const
  {
    return "list routes";
  }

  std::string
  operator()(const RemoveConnectionCommand& c) const
  {
    return withArgs("remove connection", c.args);
  }

  std::string
  operator()(const RemoveRouteCommand& c) const
  {
    return withArgs("remove route", c.args);
  }

  std::string
  operator()(const QuitCommand&) const
  {
    return "quit";
  }

  std::string
  operator()(const SetDebugCommand&) const
  {
    return "set debug";
  }

  std::string
  operator()(const UnsetDebugCommand&) const
  {
    return "unset debug";
  }

  std::string
  operator()(const HelpCommand& c) const
  {
    return c.topic ? "help " + *c.topic : "help";
  }

  static std::string
  withArgs(std::string line, const std::vector<std::string>& args)
  {
    for (const auto& arg : args) {
      line += ' ';
      line += arg;
    }
    return line;
  }
};

} // namespace

std::string
renderCommand(const ControlCommand& command)
{
  return std::visit(Renderer{}, command);
}

std::vector<std::string>
helpText(const std::optional<std::string>& topic)
{
  std::string_view key = topic ? std::string_view(*topic) : std::string_view();
  if (auto space = key.find(' '); space != std::string_view::npos) {
    key = key.substr(0, space);
  }

  if (key == "add") {
    return {
      "add listener (tcp|udp) <symbolic> <ip_address> <port>",
      "add listener local <symbolic> <path>",
      "add listener ether <symbolic> <interface> <ethertype>",
      "add connection (tcp|udp) <symbolic> <remote_ip> [<remote_port> [<local_ip> [<local_port>]]]",
      "add connection ether <symbolic> <dmac> <interface>",
      "add route <symbolic|connid> <prefix> [<cost>]",
      "  prefix is written lci:/seg1/seg2; lci:/ is the default route",
      "  the default port is 9695; ethernet transports are not supported",
    };
  }
  if (key == "list") {
    return {
      "list connections",
      "list interfaces",
      "list routes",
    };
  }
  if (key == "remove") {
    return {
      "remove connection (not implemented)",
      "remove route (not implemented)",
    };
  }
  if (key == "quit" || key == "set" || key == "unset") {
    return {
      "quit          leave interactive mode",
      "set debug     show control channel traffic",
      "unset debug   hide control channel traffic",
    };
  }
  return {
    "commands:",
    "  add listener | add connection | add route",
    "  list connections | list interfaces | list routes",
    "  remove connection | remove route",
    "  quit | set debug | unset debug",
    "  help <command>",
  };
}

} // namespace metis
