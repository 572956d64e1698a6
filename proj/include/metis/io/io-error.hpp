#ifndef METIS_IO_IO_ERROR_HPP
#define METIS_IO_IO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace metis {

enum class IoErrorCode {
  BadAddress,
  BindFailed,
  NoListener,
  SymbolicTaken,
  ConnectionExists,
  ConnectFailed,
  SocketError,
};

const char*
toString(IoErrorCode code) noexcept;

class IoError : public std::runtime_error
{
public:
  IoError(IoErrorCode code, const std::string& what)
    : std::runtime_error(what)
    , m_code(code)
  {
  }

  IoErrorCode
  code() const noexcept
  {
    return m_code;
  }

private:
  IoErrorCode m_code;
};

} // namespace metis

#endif // METIS_IO_IO_ERROR_HPP
