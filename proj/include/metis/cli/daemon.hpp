#ifndef METIS_CLI_DAEMON_HPP
#define METIS_CLI_DAEMON_HPP

#include "metis/core/logger.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace metis {

class Forwarder;

struct LogSpec
{
  /// std::nullopt means every facility.
  std::optional<LogFacility> facility;
  LogLevel level = LogLevel::Error;

  friend bool
  operator==(const LogSpec&, const LogSpec&) = default;
};

/// Parses "facility=level"; facility may be "all". Throws std::invalid_argument.
LogSpec
parseLogSpec(const std::string& text);

/// Applies @p specs in order, so the last one for a facility wins.
void
applyLogSpecs(Logger& logger, const std::vector<LogSpec>& specs);

struct DaemonOptions
{
  std::uint16_t port = 9695;
  bool daemonMode = false;
  std::size_t capacity = 100000;
  std::vector<LogSpec> logSpecs;
  std::optional<std::string> logFile;
  std::optional<std::string> configFile;
};

/**
 * Parses the daemon command line (args[0] is the program name). Returns the
 * options, or an exit code after printing help or a usage error.
 */
std::variant<DaemonOptions, int>
parseDaemonOptions(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Creates the TCP and UDP listeners used when no configuration file is given.
void
addDefaultListeners(Forwarder& forwarder, std::uint16_t port);

int
daemonMain(const std::vector<std::string>& args);

} // namespace metis

#endif // METIS_CLI_DAEMON_HPP
