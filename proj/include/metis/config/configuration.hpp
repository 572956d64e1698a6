#ifndef METIS_CONFIG_CONFIGURATION_HPP
#define METIS_CONFIG_CONFIGURATION_HPP

#include "metis/common.hpp"
#include "metis/config/control-codec.hpp"
#include "metis/wirefmt/packet.hpp"

#include <iosfwd>
#include <stdexcept>

namespace metis {

class InterfaceProvider;
class IoModule;
class Logger;
class MessageProcessor;

enum class ConfigFileErrorKind {
  Io,
  Syntax,
  Exec,
};

class ConfigFileError : public std::runtime_error
{
public:
  ConfigFileError(ConfigFileErrorKind kind, std::size_t line, const std::string& what)
    : std::runtime_error(what)
    , m_kind(kind)
    , m_line(line)
  {
  }

  ConfigFileErrorKind
  kind() const noexcept
  {
    return m_kind;
  }

  /// 1-based; 0 when the file could not be read at all.
  std::size_t
  line() const noexcept
  {
    return m_line;
  }

private:
  ConfigFileErrorKind m_kind;
  std::size_t m_line;
};

/**
 * Executes control commands against the daemon's listeners, connections,
 * and FIB. Commands arrive from a configuration file or as Control packets.
 */
class Configuration
{
public:
  Configuration(IoModule& io, MessageProcessor& processor, const InterfaceProvider& interfaces,
                Logger& logger, Clock clock);

  /// Never throws; failures become a Nack.
  ControlResponse
  execute(const ControlCommand& command);

  /// Decodes the JSON request carried by @p message, executes it, and sends
  /// the response back on the ingress connection.
  void
  handleControlPacket(const Message& message);

  /// Response to the JSON request @p json (a Nack for undecodable input).
  ControlResponse
  handleRequest(std::string_view json);

  /// Throws ConfigFileError citing the first failing line.
  void
  loadFile(const std::string& path);

  void
  loadStream(std::istream& input, const std::string& sourceName = "<stream>");

private:
  ControlResponse
  addListener(const AddListenerCommand& command);

  ControlResponse
  addConnection(const AddConnectionCommand& command);

  ControlResponse
  addRoute(const AddRouteCommand& command);

  ControlResponse
  listConnections() const;

  ControlResponse
  listInterfaces() const;

  ControlResponse
  listRoutes() const;

private:
  IoModule& m_io;
  MessageProcessor& m_processor;
  const InterfaceProvider& m_interfaces;
  Logger& m_logger;
  Clock m_clock;
};

} // namespace metis

#endif // METIS_CONFIG_CONFIGURATION_HPP
