#include "metis/config/configuration.hpp"
#include "metis/core/logger.hpp"
#include "metis/io/connection.hpp"
#include "metis/io/interfaces.hpp"
#include "metis/io/io-error.hpp"
#include "metis/io/io-module.hpp"
#include "metis/processor/message-processor.hpp"

#include <charconv>
#include <fstream>

namespace metis {

Configuration::Configuration(IoModule& io, MessageProcessor& processor,
                             const InterfaceProvider& interfaces, Logger& logger, Clock clock)
  : m_io(io)
  , m_processor(processor)
  , m_interfaces(interfaces)
  , m_logger(logger)
  , m_clock(std::move(clock))
{
}

ControlResponse
Configuration::execute(const ControlCommand& command)
{
  try {
    return std::visit([this] (const auto& c) -> ControlResponse {
      using T = std::decay_t<decltype(c)>;
      if constexpr (std::is_same_v<T, AddListenerCommand>) {
        return addListener(c);
      }
      else if constexpr (std::is_same_v<T, AddConnectionCommand>) {
        return addConnection(c);
      }
      else if constexpr (std::is_same_v<T, AddConnectionEtherCommand>) {
        return nack("unsupported transport: ether");
      }
      else if constexpr (std::is_same_v<T, AddRouteCommand>) {
        return addRoute(c);
      }
      else if constexpr (std::is_same_v<T, ListConnectionsCommand>) {
        return listConnections();
      }
      else if constexpr (std::is_same_v<T, ListInterfacesCommand>) {
        return listInterfaces();
      }
      else if constexpr (std::is_same_v<T, ListRoutesCommand>) {
        return listRoutes();
      }
      else if constexpr (std::is_same_v<T, RemoveConnectionCommand> ||
                         std::is_same_v<T, RemoveRouteCommand>) {
        return nack("Not implemented");
      }
      else if constexpr (std::is_same_v<T, HelpCommand>) {
        return ack({}, helpText(c.topic));
      }
      else {
        return nack(fmt::format("'{}' is a metis_control command", renderCommand(c)));
      }
    }, command);
  }
  catch (const std::exception& e) {
    return nack(e.what());
  }
}

ControlResponse
Configuration::addListener(const AddListenerCommand& command)
{
  EncapType encap;
  Address address;
  switch (command.protocol) {
    case ListenerProtocol::Tcp:
    case ListenerProtocol::Udp:
      encap = command.protocol == ListenerProtocol::Tcp ? EncapType::Tcp : EncapType::Udp;
      address = Address::resolve(command.address, command.port.value_or(kDefaultPort));
      break;
    case ListenerProtocol::Local:
      encap = EncapType::Local;
      address = Address::local(command.address);
      break;
    case ListenerProtocol::Ether:
    default:
      return nack("unsupported transport: ether");
  }

  auto& listener = m_io.addListener(encap, address, command.symbolic);
  m_logger.logf(LogFacility::Config, LogLevel::Info, "listener {} {} on {}", command.symbolic,
                toString(encap), listener.listenAddress().toString());
  return ack(fmt::format("listener {} on {}", command.symbolic, listener.listenAddress().toString()));
}

ControlResponse
Configuration::addConnection(const AddConnectionCommand& command)
{
  auto remote = Address::resolve(command.remoteHost, command.remotePort);
  std::optional<Address> local;
  if (command.localHost) {
    local = Address::resolve(*command.localHost, command.localPort.value_or(0));
  }

  auto kind = command.protocol == TunnelProtocol::Tcp ? TunnelKind::Tcp : TunnelKind::Udp;
  auto id = m_io.createTunnel(kind, command.symbolic, remote, local);
  m_logger.logf(LogFacility::Config, LogLevel::Info, "connection {} ({}) to {}", command.symbolic,
                toString(id), remote.toString());
  return ack(fmt::format("connection {} id {}", command.symbolic, toString(id)));
}

ControlResponse
Configuration::addRoute(const AddRouteCommand& command)
{
  auto& table = m_io.table();
  auto connection = table.findBySymbolic(command.symbolic);
  if (connection == nullptr) {
    std::uint32_t numeric = 0;
    const auto* end = command.symbolic.data() + command.symbolic.size();
    auto [ptr, ec] = std::from_chars(command.symbolic.data(), end, numeric);
    if (ec == std::errc{} && ptr == end && !command.symbolic.empty()) {
      connection = table.findById(ConnectionId{numeric});
    }
  }
  if (connection == nullptr) {
    return nack(fmt::format("unknown connection '{}'", command.symbolic));
  }

  m_processor.fib().addRoute(command.prefix, connection->id(), command.cost);
  m_logger.logf(LogFacility::Config, LogLevel::Info, "route {} via {} cost {}",
                command.prefix.toUri(), toString(connection->id()), command.cost);
  return ack(fmt::format("route {} via {}", command.prefix.toUri(), toString(connection->id())));
}

ControlResponse
Configuration::listConnections() const
{
  std::vector<std::string> rows;
  for (const auto& connection : m_io.table().list()) {
    const auto& pair = connection->addressPair();
    rows.push_back(fmt::format("{:>5} {:>4} {} {} {}", toUnsigned(connection->id()),
                               connection->isUp() ? "UP" : "DOWN", pair.local.toString(),
                               pair.remote.toString(), toString(connection->kind())));
  }
  return ack({}, std::move(rows));
}

ControlResponse
Configuration::listInterfaces() const
{
  std::vector<std::string> rows;
  for (const auto& info : m_interfaces.interfaces()) {
    rows.push_back(fmt::format("{:>3} {:>10} {}{} {:>8} {}", info.index, info.name,
                               info.loopback ? 'l' : ' ', info.multicast ? 'm' : ' ', info.mtu,
                               info.addresses.empty() ? std::string() : info.addresses.front()));
    for (std::size_t i = 1; i < info.addresses.size(); ++i) {
      rows.push_back(info.addresses[i]);
    }
  }
  return ack(fmt::format("{:>3} {:>10} {:>2} {:>8}", "int", "name", "lm", "MTU"), std::move(rows));
}

ControlResponse
Configuration::listRoutes() const
{
  std::vector<std::string> rows;
  for (const auto& entry : m_processor.fib().list()) {
    for (auto nexthop : entry.nexthops) {
      rows.push_back(fmt::format("{:>6} {:>9} {:>7} {:>8} {:>20} {}", toUnsigned(nexthop), "STATIC",
                                 "LONGEST", entry.cost, "---.---.---.---/....",
                                 entry.prefix.toUri()));
    }
  }
  return ack(fmt::format("{:>6} {:>9} {:>7} {:>8} {:>20} {}", "iface", "protocol", "route", "cost",
                         "next", "prefix"),
             std::move(rows));
}

ControlResponse
Configuration::handleRequest(std::string_view json)
{
  ControlRequest request;
  try {
    request = decodeRequest(json);
  }
  catch (const CodecError& e) {
    auto response = nack(e.what());
    response.seq = e.seq().value_or(0);
    return response;
  }

  auto response = execute(request.command);
  response.seq = request.seq;
  m_logger.logf(LogFacility::Config, LogLevel::Debug, "control seq {} '{}' -> {}", request.seq,
                renderCommand(request.command), response.isAck() ? "ACK" : "NACK");
  return response;
}

void
Configuration::handleControlPacket(const Message& message)
{
  auto response = handleRequest(message.payloadAsString());

  auto connection = m_io.table().findById(message.ingressId());
  if (connection == nullptr) {
    return;
  }

  Buffer encoded;
  try {
    encoded = encodeControl(encodeResponse(response));
  }
  catch (const WireError&) {
    auto tooLarge = nack("response too large");
    tooLarge.seq = response.seq;
    encoded = encodeControl(encodeResponse(tooLarge));
  }
  connection->send(parseMessage(std::move(encoded), ConnectionId{0}, m_clock()));
}

void
Configuration::loadFile(const std::string& path)
{
  std::ifstream input(path);
  if (!input) {
    throw ConfigFileError(ConfigFileErrorKind::Io, 0, fmt::format("{}: cannot open file", path));
  }
  loadStream(input, path);
}

void
Configuration::loadStream(std::istream& input, const std::string& sourceName)
{
  std::string line;
  std::size_t number = 0;
  while (std::getline(input, line)) {
    ++number;
    std::optional<ControlCommand> command;
    try {
      command = parseCommand(line);
    }
    catch (const SyntaxError& e) {
      throw ConfigFileError(ConfigFileErrorKind::Syntax, number,
                            fmt::format("{}:{}: {}", sourceName, number, e.what()));
    }
    if (!command) {
      continue;
    }

    auto response = execute(*command);
    if (!response.isAck()) {
      throw ConfigFileError(ConfigFileErrorKind::Exec, number,
                            fmt::format("{}:{}: {}", sourceName, number, response.message));
    }
  }
  if (input.bad()) {
    throw ConfigFileError(ConfigFileErrorKind::Io, number,
                          fmt::format("{}: read error", sourceName));
  }
}

} // namespace metis
