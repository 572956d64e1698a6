#include "metis/cli/control.hpp"
#include "metis/io/address.hpp"
#include "metis/io/io-error.hpp"
#include "metis/wirefmt/packet.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <sys/socket.h>
#include <unistd.h>

namespace metis {

namespace {

constexpr auto kDefaultTimeout = std::chrono::seconds(10);

[[noreturn]] void
throwErrno(IoErrorCode code, const std::string& context)
{
  throw IoError(code, fmt::format("{}: {}", context, std::strerror(errno)));
}

int
connectTo(const Address& address)
{
  sockaddr_storage storage{};
  auto length = address.toSockaddr(storage);
  int fd = ::socket(storage.ss_family, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) {
    throwErrno(IoErrorCode::SocketError, "socket");
  }
  if (::connect(fd, reinterpret_cast<sockaddr*>(&storage), length) < 0) {
    int saved = errno;
    ::close(fd);
    errno = saved;
    throwErrno(IoErrorCode::ConnectFailed, fmt::format("cannot connect to {}", address.toString()));
  }
  return fd;
}

} // namespace

ControlClient::ControlClient(int fd, std::string peer)
  : m_fd(fd)
  , m_peer(std::move(peer))
{
  setTimeout(kDefaultTimeout);
}

ControlClient
ControlClient::connectTcp(const std::string& host, std::uint16_t port)
{
  auto address = Address::resolve(host, port);
  return ControlClient(connectTo(address), address.toString());
}

ControlClient
ControlClient::connectLocal(const std::string& path)
{
  auto address = Address::local(path);
  return ControlClient(connectTo(address), address.toString());
}

ControlClient::ControlClient(ControlClient&& other) noexcept
  : m_fd(std::exchange(other.m_fd, -1))
  , m_peer(std::move(other.m_peer))
  , m_nextSeq(other.m_nextSeq)
  , m_trace(other.m_trace)
{
}

ControlClient&
ControlClient::operator=(ControlClient&& other) noexcept
{
  if (this != &other) {
    if (m_fd >= 0) {
      ::close(m_fd);
    }
    m_fd = std::exchange(other.m_fd, -1);
    m_peer = std::move(other.m_peer);
    m_nextSeq = other.m_nextSeq;
    m_trace = other.m_trace;
  }
  return *this;
}

ControlClient::~ControlClient()
{
  if (m_fd >= 0) {
    ::close(m_fd);
  }
}

void
ControlClient::setTimeout(std::chrono::milliseconds timeout)
{
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
  ::setsockopt(m_fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  ::setsockopt(m_fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

void
ControlClient::readExactly(std::uint8_t* data, std::size_t length)
{
  std::size_t done = 0;
  while (done < length) {
    auto n = ::recv(m_fd, data + done, length - done, 0);
    if (n == 0) {
      throw IoError(IoErrorCode::SocketError, "connection closed by forwarder");
    }
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      if (errno == EAGAIN || errno == EWOULDBLOCK) {
        throw IoError(IoErrorCode::SocketError, "timed out waiting for the forwarder");
      }
      throwErrno(IoErrorCode::SocketError, "recv");
    }
    done += static_cast<std::size_t>(n);
  }
}

ControlResponse
ControlClient::request(const ControlCommand& command)
{
  auto seq = m_nextSeq++;
  auto json = encodeRequest(command, seq);
  if (m_trace != nullptr) {
    *m_trace << "-> " << m_peer << " " << json << "\n";
  }

  auto packet = encodeControl(json);
  std::size_t sent = 0;
  while (sent < packet.size()) {
    auto n = ::send(m_fd, packet.data() + sent, packet.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      throwErrno(IoErrorCode::SocketError, "send");
    }
    sent += static_cast<std::size_t>(n);
  }

  while (true) {
    Buffer buffer(kFixedHeaderSize);
    readExactly(buffer.data(), buffer.size());
    auto header = parseFixedHeader(buffer);
    buffer.resize(header.packetLength);
    readExactly(buffer.data() + kFixedHeaderSize, buffer.size() - kFixedHeaderSize);

    auto message = parseMessage(std::move(buffer), ConnectionId{0}, 0);
    if (message.type() != PacketType::Control) {
      continue;
    }
    auto text = message.payloadAsString();
    if (m_trace != nullptr) {
      *m_trace << "<- " << m_peer << " " << text << "\n";
    }
    auto response = decodeResponse(text);
    if (response.seq == seq || response.seq == 0) {
      return response;
    }
  }
}

std::optional<std::string>
processEnv(const std::string& name)
{
  const char* value = std::getenv(name.c_str());
  if (value == nullptr) {
    return std::nullopt;
  }
  return std::string(value);
}

namespace {

ControlClient
connectFromEnvironment(const EnvLookup& env)
{
  if (auto path = env("METIS_LOCALPATH"); path && !path->empty()) {
    return ControlClient::connectLocal(*path);
  }

  std::uint16_t port = 9695;
  if (auto text = env("METIS_PORT"); text && !text->empty()) {
    const auto* end = text->data() + text->size();
    auto [ptr, ec] = std::from_chars(text->data(), end, port);
    if (ec != std::errc{} || ptr != end) {
      throw IoError(IoErrorCode::BadAddress, fmt::format("invalid METIS_PORT '{}'", *text));
    }
  }
  return ControlClient::connectTcp("127.0.0.1", port);
}

class Session
{
public:
  Session(std::ostream& out, std::ostream& err, const EnvLookup& env)
    : m_out(out)
    , m_err(err)
    , m_env(env)
  {
  }

  /// Exit status of one line.
  int
  run(const ControlCommand& command)
  {
    if (std::holds_alternative<QuitCommand>(command)) {
      m_quit = true;
      return 0;
    }
    if (std::holds_alternative<SetDebugCommand>(command)) {
      setDebug(true);
      return 0;
    }
    if (std::holds_alternative<UnsetDebugCommand>(command)) {
      setDebug(false);
      return 0;
    }
    if (const auto* help = std::get_if<HelpCommand>(&command)) {
      for (const auto& line : helpText(help->topic)) {
        m_out << line << "\n";
      }
      return 0;
    }

    try {
      auto response = client().request(command);
      if (!response.isAck()) {
        m_err << "error: " << response.message << "\n";
        return 1;
      }
      if (!response.message.empty()) {
        m_out << response.message << "\n";
      }
      for (const auto& row : response.rows) {
        m_out << row << "\n";
      }
      return 0;
    }
    catch (const std::exception& e) {
      m_err << "error: " << e.what() << "\n";
      m_client.reset();
      return 1;
    }
  }

  int
  runLine(std::string_view line)
  {
    std::optional<ControlCommand> command;
    try {
      command = parseCommand(line);
    }
    catch (const SyntaxError& e) {
      m_err << "error: " << e.what() << "\n";
      return 1;
    }
    return command ? run(*command) : 0;
  }

  bool
  quitRequested() const noexcept
  {
    return m_quit;
  }

private:
  ControlClient&
  client()
  {
    if (!m_client) {
      m_client = connectFromEnvironment(m_env);
      if (m_debug) {
        m_err << "connected to " << m_client->peer() << "\n";
      }
    }
    m_client->setTrace(m_debug ? &m_err : nullptr);
    return *m_client;
  }

  void
  setDebug(bool on)
  {
    m_debug = on;
    if (m_client) {
      m_client->setTrace(m_debug ? &m_err : nullptr);
    }
    m_out << "debug " << (on ? "on" : "off") << "\n";
  }

private:
  std::ostream& m_out;
  std::ostream& m_err;
  const EnvLookup& m_env;
  std::optional<ControlClient> m_client;
  bool m_debug = false;
  bool m_quit = false;
};

} // namespace

int
controlMain(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err, const EnvLookup& env)
{
  std::string keystore;
  std::string password;
  CLI::App app{"CCNx forwarder control client", args.empty() ? "metis_control" : args.front()};
  app.add_option("--keystore", keystore, "Signing keystore (accepted and ignored)");
  app.add_option("--password", password, "Keystore password (accepted and ignored)");
  app.prefix_command();
  app.footer("With a command, runs it once; otherwise reads commands interactively.");

  std::vector<const char*> argv;
  for (const auto& arg : args) {
    argv.push_back(arg.c_str());
  }
  if (argv.empty()) {
    argv.push_back("metis_control");
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  }
  catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  Session session(out, err, env);
  auto words = app.remaining();
  if (!words.empty()) {
    return session.runLine(fmt::format("{}", fmt::join(words, " ")));
  }

  std::string line;
  while (!session.quitRequested()) {
    out << "metis> " << std::flush;
    if (!std::getline(in, line)) {
      out << "\n";
      break;
    }
    session.runLine(line);
  }
  return 0;
}

} // namespace metis
