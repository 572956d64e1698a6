#include "metis/core/logger.hpp"

#include <chrono>
#include <ctime>
#include <iostream>
#include <stdexcept>

namespace metis {

namespace {

constexpr std::array<std::string_view, kLogFacilityCount> kFacilityNames = {
  "config", "core", "io", "message", "processor",
};

constexpr std::array<std::string_view, 8> kLevelNames = {
  "debug", "info", "notice", "warning", "error", "critical", "alert", "off",
};

std::string
iso8601Now()
{
  using namespace std::chrono;
  auto now = system_clock::now();
  auto seconds = system_clock::to_time_t(now);
  auto millis = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;

  std::tm utc{};
  ::gmtime_r(&seconds, &utc);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z",
                     utc.tm_year + 1900, utc.tm_mon + 1, utc.tm_mday,
                     utc.tm_hour, utc.tm_min, utc.tm_sec, millis);
}

} // namespace

const char*
toString(LogFacility facility) noexcept
{
  return kFacilityNames[static_cast<std::size_t>(facility)].data();
}

const char*
toString(LogLevel level) noexcept
{
  return kLevelNames[static_cast<std::size_t>(level)].data();
}

std::optional<LogFacility>
parseLogFacility(std::string_view name)
{
  for (std::size_t i = 0; i < kFacilityNames.size(); ++i) {
    if (kFacilityNames[i] == name) {
      return static_cast<LogFacility>(i);
    }
  }
  return std::nullopt;
}

std::optional<LogLevel>
parseLogLevel(std::string_view name)
{
  for (std::size_t i = 0; i < kLevelNames.size(); ++i) {
    if (kLevelNames[i] == name) {
      return static_cast<LogLevel>(i);
    }
  }
  return std::nullopt;
}

Logger::Logger()
  : m_out(&std::clog)
{
  m_levels.fill(LogLevel::Error);
}

void
Logger::setLevel(LogFacility facility, LogLevel level) noexcept
{
  m_levels[static_cast<std::size_t>(facility)] = level;
}

void
Logger::setAllLevels(LogLevel level) noexcept
{
  m_levels.fill(level);
}

bool
Logger::isLoggable(LogFacility facility, LogLevel level) const noexcept
{
  auto threshold = m_levels[static_cast<std::size_t>(facility)];
  return threshold != LogLevel::Off && level != LogLevel::Off && level >= threshold;
}

void
Logger::openFile(const std::string& path)
{
  auto file = std::make_unique<std::ofstream>(path, std::ios::app);
  if (!*file) {
    throw std::runtime_error("cannot open log file " + path);
  }
  m_file = std::move(file);
  m_out = m_file.get();
}

void
Logger::setStream(std::ostream& stream)
{
  m_file.reset();
  m_out = &stream;
}

void
Logger::log(LogFacility facility, LogLevel level, std::string_view message)
{
  if (!isLoggable(facility, level)) {
    return;
  }
  *m_out << iso8601Now() << ' ' << toString(facility) << ' ' << toString(level) << ' ' << message << '\n';
  m_out->flush();
}

} // namespace metis
