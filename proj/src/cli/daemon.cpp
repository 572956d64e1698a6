#include "metis/cli/daemon.hpp"
#include "metis/forwarder.hpp"
#include "metis/io/io-error.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fcntl.h>
#include <filesystem>
#include <iostream>
#include <sys/stat.h>
#include <unistd.h>

namespace metis {

LogSpec
parseLogSpec(const std::string& text)
{
  auto equals = text.find('=');
  if (equals == std::string::npos) {
    throw std::invalid_argument(fmt::format("'{}' is not facility=level", text));
  }
  auto facilityName = std::string_view(text).substr(0, equals);
  auto levelName = std::string_view(text).substr(equals + 1);

  LogSpec logSpec;
  if (facilityName != "all") {
    logSpec.facility = parseLogFacility(facilityName);
    if (!logSpec.facility) {
      throw std::invalid_argument(fmt::format("unknown log facility '{}'", facilityName));
    }
  }
  auto level = parseLogLevel(levelName);
  if (!level) {
    throw std::invalid_argument(fmt::format("unknown log level '{}'", levelName));
  }
  logSpec.level = *level;
  return logSpec;
}

void
applyLogSpecs(Logger& logger, const std::vector<LogSpec>& logSpecs)
{
  for (const auto& logSpec : logSpecs) {
    if (logSpec.facility) {
      logger.setLevel(*logSpec.facility, logSpec.level);
    }
    else {
      logger.setAllLevels(logSpec.level);
    }
  }
}

std::variant<DaemonOptions, int>
parseDaemonOptions(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  DaemonOptions options;
  std::vector<std::string> logArgs;
  std::string logFile;
  std::string configFile;

  CLI::App app{"CCNx forwarder daemon", args.empty() ? "metis_daemon" : args.front()};
  app.add_option("--port", options.port, "TCP and UDP port for the default listeners")
    ->default_val(9695);
  app.add_flag("--daemon", options.daemonMode, "Detach from the console (requires --log-file)");
  app.add_option("--capacity", options.capacity, "Content store size in objects, 0 disables it")
    ->default_val(kDefaultStoreCapacity);
  app.add_option("--log", logArgs,
                 "facility=level; facility is all|config|core|io|message|processor, level is "
                 "debug|info|notice|warning|error|critical|alert|off")
    ->allow_extra_args(false);
  app.add_option("--log-file", logFile, "Append log lines to this file");
  app.add_option("--config", configFile, "Read configuration commands from this file");

  std::vector<const char*> argv;
  for (const auto& arg : args) {
    argv.push_back(arg.c_str());
  }
  if (argv.empty()) {
    argv.push_back("metis_daemon");
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    for (const auto& text : logArgs) {
      options.logSpecs.push_back(parseLogSpec(text));
    }
  }
  catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  if (!logFile.empty()) {
    options.logFile = logFile;
  }
  if (!configFile.empty()) {
    options.configFile = configFile;
  }
  if (options.daemonMode && !options.logFile) {
    err << "error: --daemon must be used with --log-file\n";
    return 2;
  }
  return options;
}

void
addDefaultListeners(Forwarder& forwarder, std::uint16_t port)
{
  auto& io = forwarder.io();
  auto any4 = *Address::fromIp("0.0.0.0", port);
  io.addListener(EncapType::Tcp, any4, "tcp4-default");
  io.addListener(EncapType::Udp, any4, "udp4-default");

  auto any6 = *Address::fromIp("::", port);
  for (auto encap : {EncapType::Tcp, EncapType::Udp}) {
    try {
      io.addListener(encap, any6, fmt::format("{}6-default", encap == EncapType::Tcp ? "tcp" : "udp"));
    }
    catch (const IoError& e) {
      forwarder.logger().logf(LogFacility::IO, LogLevel::Warning, "no IPv6 {} listener: {}",
                              toString(encap), e.what());
    }
  }
}

namespace {

Dispatcher* g_dispatcher = nullptr;

extern "C" void
onTerminate(int)
{
  if (g_dispatcher != nullptr) {
    g_dispatcher->interrupt();
  }
}

bool
detach(std::ostream& err)
{
  pid_t pid = ::fork();
  if (pid < 0) {
    err << "error: fork failed\n";
    return false;
  }
  if (pid > 0) {
    ::_exit(0);
  }
  ::setsid();
  int null = ::open("/dev/null", O_RDWR | O_CLOEXEC);
  if (null >= 0) {
    ::dup2(null, STDIN_FILENO);
    ::dup2(null, STDOUT_FILENO);
    ::dup2(null, STDERR_FILENO);
    ::close(null);
  }
  return true;
}

std::string
absolutePath(const std::string& path)
{
  std::error_code ec;
  auto absolute = std::filesystem::absolute(path, ec);
  return ec ? path : absolute.string();
}

} // namespace

int
daemonMain(const std::vector<std::string>& args)
{
  auto parsed = parseDaemonOptions(args, std::cout, std::cerr);
  if (auto* code = std::get_if<int>(&parsed)) {
    return *code;
  }
  auto options = std::get<DaemonOptions>(std::move(parsed));

  if (options.daemonMode) {
    options.logFile = absolutePath(*options.logFile);
    if (options.configFile) {
      options.configFile = absolutePath(*options.configFile);
    }
    if (!detach(std::cerr)) {
      return 1;
    }
  }

  ForwarderOptions forwarderOptions;
  forwarderOptions.storeCapacity = options.capacity;
  Forwarder forwarder(std::move(forwarderOptions));
  auto& logger = forwarder.logger();
  applyLogSpecs(logger, options.logSpecs);
  if (options.logFile) {
    try {
      logger.openFile(*options.logFile);
    }
    catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }

  try {
    if (options.configFile) {
      forwarder.configuration().loadFile(*options.configFile);
    }
    else {
      addDefaultListeners(forwarder, options.port);
    }
  }
  catch (const std::exception& e) {
    logger.logf(LogFacility::Config, LogLevel::Critical, "startup failed: {}", e.what());
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  g_dispatcher = &forwarder.dispatcher();
  struct sigaction action{};
  action.sa_handler = onTerminate;
  sigemptyset(&action.sa_mask);
  ::sigaction(SIGINT, &action, nullptr);
  ::sigaction(SIGTERM, &action, nullptr);
  std::signal(SIGPIPE, SIG_IGN);

  logger.logf(LogFacility::Core, LogLevel::Notice, "metis started, content store capacity {}",
              options.capacity);
  forwarder.dispatcher().run();
  logger.logf(LogFacility::Core, LogLevel::Notice, "metis stopping");

  g_dispatcher = nullptr;
  return 0;
}

} // namespace metis
