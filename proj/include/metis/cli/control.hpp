#ifndef METIS_CLI_CONTROL_HPP
#define METIS_CLI_CONTROL_HPP

#include "metis/config/control-codec.hpp"

#include <chrono>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace metis {

/// Blocking client for the daemon's control channel.
class ControlClient
{
public:
  /// Throws IoError (ConnectFailed).
  static ControlClient
  connectTcp(const std::string& host, std::uint16_t port);

  /// Throws IoError (ConnectFailed).
  static ControlClient
  connectLocal(const std::string& path);

  ControlClient(ControlClient&& other) noexcept;

  ControlClient&
  operator=(ControlClient&& other) noexcept;

  ~ControlClient();

  /// Sends @p command and waits for the response with the same sequence
  /// number. Throws IoError or CodecError.
  ControlResponse
  request(const ControlCommand& command);

  /// When set, every request and response is echoed to @p trace.
  void
  setTrace(std::ostream* trace) noexcept
  {
    m_trace = trace;
  }

  void
  setTimeout(std::chrono::milliseconds timeout);

  const std::string&
  peer() const noexcept
  {
    return m_peer;
  }

private:
  ControlClient(int fd, std::string peer);

  void
  readExactly(std::uint8_t* data, std::size_t length);

private:
  int m_fd = -1;
  std::string m_peer;
  std::uint64_t m_nextSeq = 1;
  std::ostream* m_trace = nullptr;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string>
processEnv(const std::string& name);

/**
 * The metis_control program. With a command on the command line it runs that
 * one command; otherwise it reads commands from @p in until 'quit' or EOF.
 * Exit status is 0 on Ack and 1 on Nack or error.
 */
int
controlMain(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err, const EnvLookup& env = processEnv);

} // namespace metis

#endif // METIS_CLI_CONTROL_HPP
