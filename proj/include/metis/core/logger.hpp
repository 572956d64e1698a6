#ifndef METIS_CORE_LOGGER_HPP
#define METIS_CORE_LOGGER_HPP

#include <array>
#include <fmt/format.h>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace metis {

enum class LogFacility {
  Config,
  Core,
  IO,
  Message,
  Processor,
};

inline constexpr std::size_t kLogFacilityCount = 5;

enum class LogLevel {
  Debug,
  Info,
  Notice,
  Warning,
  Error,
  Critical,
  Alert,
  Off,
};

const char*
toString(LogFacility facility) noexcept;

const char*
toString(LogLevel level) noexcept;

/// nullopt for "all" as well as for unknown names; use isAllFacilities() to tell them apart.
std::optional<LogFacility>
parseLogFacility(std::string_view name);

std::optional<LogLevel>
parseLogLevel(std::string_view name);

/**
 * Per-facility leveled logger. Lines look like
 * "2026-01-01T00:00:00.000Z io info accepted connection 3".
 */
class Logger
{
public:
  /// Writes to std::clog; every facility starts at Error.
  Logger();

  void
  setLevel(LogFacility facility, LogLevel level) noexcept;

  void
  setAllLevels(LogLevel level) noexcept;

  LogLevel
  level(LogFacility facility) const noexcept
  {
    return m_levels[static_cast<std::size_t>(facility)];
  }

  bool
  isLoggable(LogFacility facility, LogLevel level) const noexcept;

  /// Throws std::runtime_error if the file cannot be opened for append.
  void
  openFile(const std::string& path);

  /// Redirects output to @p stream, which must outlive the logger.
  void
  setStream(std::ostream& stream);

  void
  log(LogFacility facility, LogLevel level, std::string_view message);

  template<typename... Args>
  void
  logf(LogFacility facility, LogLevel level, fmt::format_string<Args...> format, Args&&... args)
  {
    if (isLoggable(facility, level)) {
      log(facility, level, fmt::format(format, std::forward<Args>(args)...));
    }
  }

private:
  std::array<LogLevel, kLogFacilityCount> m_levels;
  std::unique_ptr<std::ofstream> m_file;
  std::ostream* m_out;
};

} // namespace metis

#endif // METIS_CORE_LOGGER_HPP
