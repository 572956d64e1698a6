#include "acceptance.hpp"

#include "metis/io/address.hpp"

#include <csignal>
#include <filesystem>
#include <fstream>
#include <map>
#include <netinet/in.h>
#include <poll.h>
#include <regex>
#include <set>
#include <sstream>
#include <sys/socket.h>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

namespace metis::acceptance {
namespace {

using namespace std::chrono_literals;

struct Completed
{
  int status = -1;
  std::string out;
  std::string err;
};

/// Runs @p argv with extra environment variables and captures its output.
Completed
runProgram(const std::vector<std::string>& argv, const std::map<std::string, std::string>& env)
{
  int outPipe[2];
  int errPipe[2];
  if (::pipe(outPipe) != 0 || ::pipe(errPipe) != 0) {
    throw std::runtime_error("pipe failed");
  }
  pid_t child = ::fork();
  if (child == 0) {
    ::dup2(outPipe[1], STDOUT_FILENO);
    ::dup2(errPipe[1], STDERR_FILENO);
    ::close(outPipe[0]);
    ::close(errPipe[0]);
    ::unsetenv("METIS_PORT");
    ::unsetenv("METIS_LOCALPATH");
    for (const auto& [key, value] : env) {
      ::setenv(key.c_str(), value.c_str(), 1);
    }
    std::vector<char*> args;
    for (const auto& arg : argv) {
      args.push_back(const_cast<char*>(arg.c_str()));
    }
    args.push_back(nullptr);
    ::execv(args[0], args.data());
    ::_exit(127);
  }
  ::close(outPipe[1]);
  ::close(errPipe[1]);

  Completed result;
  pollfd fds[2] = {{outPipe[0], POLLIN, 0}, {errPipe[0], POLLIN, 0}};
  std::string* sinks[2] = {&result.out, &result.err};
  int open = 2;
  while (open > 0) {
    if (::poll(fds, 2, 10000) <= 0) {
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd >= 0 && (fds[i].revents & (POLLIN | POLLHUP)) != 0) {
        char buffer[4096];
        auto n = ::read(fds[i].fd, buffer, sizeof(buffer));
        if (n <= 0) {
          ::close(fds[i].fd);
          fds[i].fd = -1;
          --open;
        }
        else {
          sinks[i]->append(buffer, static_cast<std::size_t>(n));
        }
      }
    }
  }
  for (auto& fd : fds) {
    if (fd.fd >= 0) {
      ::close(fd.fd);
    }
  }
  int status = 0;
  ::waitpid(child, &status, 0);
  result.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

/// A port free for both TCP and UDP on 127.0.0.1 at the time of the call.
std::uint16_t
freePort()
{
  for (int attempt = 0; attempt < 50; ++attempt) {
    int tcp = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_storage storage{};
    auto length = Address::fromIp("127.0.0.1", 0)->toSockaddr(storage);
    ::bind(tcp, reinterpret_cast<sockaddr*>(&storage), length);
    socklen_t size = sizeof(storage);
    ::getsockname(tcp, reinterpret_cast<sockaddr*>(&storage), &size);
    auto port = Address::fromSockaddr(reinterpret_cast<sockaddr*>(&storage), size)->port();
    int udp = ::socket(AF_INET, SOCK_DGRAM, 0);
    bool udpFree = ::bind(udp, reinterpret_cast<sockaddr*>(&storage), size) == 0;
    ::close(udp);
    ::close(tcp);
    if (udpFree) {
      return port;
    }
  }
  throw std::runtime_error("no free port");
}

bool
waitForTcp(std::uint16_t port, std::chrono::milliseconds timeout)
{
  auto deadline = std::chrono::steady_clock::now() + timeout;
  while (std::chrono::steady_clock::now() < deadline) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_storage storage{};
    auto length = Address::fromIp("127.0.0.1", port)->toSockaddr(storage);
    bool ok = ::connect(fd, reinterpret_cast<sockaddr*>(&storage), length) == 0;
    ::close(fd);
    if (ok) {
      return true;
    }
    std::this_thread::sleep_for(20ms);
  }
  return false;
}

std::vector<std::string>
lines(const std::string& text)
{
  std::vector<std::string> out;
  std::istringstream input(text);
  for (std::string line; std::getline(input, line);) {
    out.push_back(line);
  }
  return out;
}

class Daemon
{
public:
  Daemon(const std::string& config, const std::string& logFile)
  {
    m_pid = ::fork();
    if (m_pid == 0) {
      ::execl(METIS_DAEMON_BINARY, METIS_DAEMON_BINARY, "--config", config.c_str(), "--log", "all=info",
              "--log-file", logFile.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
  }

  ~Daemon()
  {
    if (m_pid > 0) {
      ::kill(m_pid, SIGKILL);
      ::waitpid(m_pid, nullptr, 0);
    }
  }

  /// Sends SIGTERM and returns the exit status.
  int
  stop()
  {
    ::kill(m_pid, SIGTERM);
    int status = 0;
    ::waitpid(m_pid, &status, 0);
    m_pid = -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

private:
  pid_t m_pid = -1;
};

const std::regex kConnectionRow(R"(^ *(\d+) +(UP|DOWN) ((inet4|inet6|local)://\S*) ((inet4|inet6|local)://\S*) (TCP|UDP|LOCAL)$)");
const std::regex kInterfaceRow(R"(^ *\d+ +\S+ [l ][m ] +\d+ ?(\S*)$)");
const std::regex kAddressRow(R"(^(link|inet4|inet6)://\S+$)");
const std::regex kRouteRow(R"(^ *(\d+) +STATIC LONGEST +(\d+) ---\.---\.---\.---/\.\.\.\. (lci:/\S*)$)");

/// Checks the three listings and the refused command over one transport.
std::optional<std::string>
checkTransport(const std::string& label, const std::map<std::string, std::string>& env, std::uint16_t conn0Port,
               std::uint16_t conn1Port)
{
  auto control = [&] (std::vector<std::string> words) {
    words.insert(words.begin(), METIS_CONTROL_BINARY);
    return runProgram(words, env);
  };

  auto connections = control({"list", "connections"});
  if (connections.status != 0) {
    return fmt::format("{}: list connections exit {}: {}", label, connections.status, connections.err);
  }
  std::set<std::string> remotes;
  std::set<std::string> kinds;
  for (const auto& row : lines(connections.out)) {
    std::smatch match;
    if (!std::regex_match(row, match, kConnectionRow)) {
      return fmt::format("{}: connection row '{}' does not match the layout", label, row);
    }
    remotes.insert(match[5]);
    kinds.insert(match[7]);
  }
  for (auto port : {conn0Port, conn1Port}) {
    if (remotes.count(fmt::format("inet4://127.0.0.1:{}", port)) == 0) {
      return fmt::format("{}: tunnel to port {} not listed", label, port);
    }
  }
  if (kinds.count(label == "tcp" ? "TCP" : "LOCAL") == 0) {
    return fmt::format("{}: control connection itself not listed", label);
  }

  auto interfaces = control({"list", "interfaces"});
  auto interfaceLines = lines(interfaces.out);
  if (interfaces.status != 0 || interfaceLines.empty()) {
    return fmt::format("{}: list interfaces exit {}", label, interfaces.status);
  }
  if (interfaceLines.front() != "int       name lm      MTU") {
    return fmt::format("{}: interface header '{}'", label, interfaceLines.front());
  }
  std::size_t interfaceRows = 0;
  for (std::size_t i = 1; i < interfaceLines.size(); ++i) {
    if (std::regex_match(interfaceLines[i], kInterfaceRow)) {
      ++interfaceRows;
    }
    else if (!std::regex_match(interfaceLines[i], kAddressRow)) {
      return fmt::format("{}: interface row '{}' does not match the layout", label, interfaceLines[i]);
    }
  }
  if (interfaceRows == 0) {
    return fmt::format("{}: no interfaces listed", label);
  }

  auto routes = control({"list", "routes"});
  auto routeLines = lines(routes.out);
  if (routes.status != 0 || routeLines.empty()) {
    return fmt::format("{}: list routes exit {}", label, routes.status);
  }
  if (routeLines.front() != " iface  protocol   route     cost                 next prefix") {
    return fmt::format("{}: route header '{}'", label, routeLines.front());
  }
  std::set<std::string> prefixes;
  for (std::size_t i = 1; i < routeLines.size(); ++i) {
    std::smatch match;
    if (!std::regex_match(routeLines[i], match, kRouteRow)) {
      return fmt::format("{}: route row '{}' does not match the layout", label, routeLines[i]);
    }
    prefixes.insert(match[3]);
  }
  if (prefixes != std::set<std::string>{"lci:/", "lci:/eample.com"}) {
    return fmt::format("{}: routes listed {}", label, fmt::join(prefixes, ","));
  }

  auto removal = control({"remove", "route", "conn0", "lci:/"});
  if (removal.status == 0 || removal.err.find("Not implemented") == std::string::npos) {
    return fmt::format("{}: remove route gave exit {} '{}'", label, removal.status, removal.err);
  }
  return std::nullopt;
}

} // namespace

Outcome
controlPlane()
{
  auto dir = std::filesystem::path("/tmp") / fmt::format("metis-acc7-{}", ::getpid());
  std::filesystem::create_directories(dir);
  auto socketPath = (dir / "metis.sock").string();
  auto port = freePort();
  auto conn0Port = freePort();
  auto conn1Port = freePort();

  // the documented example, with the Ethernet pair swapped for a UDP tunnel
  // and the remote hostname for a loopback address
  auto configPath = (dir / "metis.cfg").string();
  {
    std::ofstream config(configPath);
    config << "#local listeners for applications\n"
           << fmt::format("add listener tcp local0 127.0.0.1 {}\n", port)
           << fmt::format("add listener udp local1 127.0.0.1 {}\n", port)
           << fmt::format("add listener local unix0 {}\n", socketPath) << "\n"
           << "# add ethernet listener and connection\n"
           << fmt::format("add connection udp conn0 127.0.0.1 {}\n", conn0Port)
           << "add route conn0 lci:/ 1\n\n"
           << "# add UDP tunnel to remote system\n"
           << fmt::format("add connection udp conn1 127.0.0.1 {}\n", conn1Port)
           << "add route conn1 lci:/eample.com 1\n";
  }

  Daemon daemon(configPath, (dir / "metis.log").string());
  if (!waitForTcp(port, 5000ms)) {
    std::filesystem::remove_all(dir);
    return fail("daemon did not start listening on port {}", port);
  }

  std::optional<std::string> problem;
  problem = checkTransport("tcp", {{"METIS_PORT", std::to_string(port)}}, conn0Port, conn1Port);
  if (!problem) {
    problem = checkTransport("unix", {{"METIS_LOCALPATH", socketPath}}, conn0Port, conn1Port);
  }
  if (!problem) {
    for (const auto* line : {"add listener ether nic0 eth0 0x0801", "add connection ether conn9 ff:ff:ff:ff:ff:ff eth0"}) {
      std::vector<std::string> argv{METIS_CONTROL_BINARY};
      std::istringstream words(line);
      for (std::string word; words >> word;) {
        argv.push_back(word);
      }
      auto result = runProgram(argv, {{"METIS_PORT", std::to_string(port)}});
      if (result.status == 0) {
        problem = fmt::format("'{}' was accepted", line);
        break;
      }
    }
  }

  auto exitStatus = daemon.stop();
  std::filesystem::remove_all(dir);
  if (problem) {
    return {false, *problem};
  }
  if (exitStatus != 0) {
    return fail("daemon exited with {}", exitStatus);
  }
  return pass("config loaded; listings match over TCP and Unix socket; remove route Nacks; ether Nacks");
}

} // namespace metis::acceptance
