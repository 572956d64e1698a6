#ifndef METIS_CONFIG_CONTROL_CODEC_HPP
#define METIS_CONFIG_CONTROL_CODEC_HPP

#include "metis/config/control-command.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace metis {

enum class ControlStatus {
  Ack,
  Nack,
};

struct ControlResponse
{
  std::uint64_t seq = 0;
  ControlStatus status = ControlStatus::Ack;
  std::string message;
  std::vector<std::string> rows;

  bool
  isAck() const noexcept
  {
    return status == ControlStatus::Ack;
  }

  friend bool
  operator==(const ControlResponse&, const ControlResponse&) = default;
};

inline ControlResponse
ack(std::string message = {}, std::vector<std::string> rows = {})
{
  return ControlResponse{0, ControlStatus::Ack, std::move(message), std::move(rows)};
}

inline ControlResponse
nack(std::string message)
{
  return ControlResponse{0, ControlStatus::Nack, std::move(message), {}};
}

struct ControlRequest
{
  std::uint64_t seq = 0;
  ControlCommand command;

  friend bool
  operator==(const ControlRequest&, const ControlRequest&) = default;
};

enum class CodecErrorCode {
  BadJson,
  UnknownAction,
};

class CodecError : public std::runtime_error
{
public:
  CodecError(CodecErrorCode code, const std::string& what,
             std::optional<std::uint64_t> seq = std::nullopt)
    : std::runtime_error(what)
    , m_code(code)
    , m_seq(seq)
  {
  }

  CodecErrorCode
  code() const noexcept
  {
    return m_code;
  }

  /// The request's sequence number, if it could be read.
  std::optional<std::uint64_t>
  seq() const noexcept
  {
    return m_seq;
  }

private:
  CodecErrorCode m_code;
  std::optional<std::uint64_t> m_seq;
};

/// {"seq": n, "action": "...", "params": {...}}
std::string
encodeRequest(const ControlCommand& command, std::uint64_t seq);

/// Throws CodecError.
ControlRequest
decodeRequest(std::string_view json);

/// {"seq": n, "status": "ACK"|"NACK", "message": "...", "rows": [...]}
std::string
encodeResponse(const ControlResponse& response);

/// Throws CodecError (BadJson).
ControlResponse
decodeResponse(std::string_view json);

} // namespace metis

#endif // METIS_CONFIG_CONTROL_CODEC_HPP
