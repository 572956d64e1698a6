#ifndef METIS_WIREFMT_NAME_HPP
#define METIS_WIREFMT_NAME_HPP

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace metis {

/**
 * A CCNx name: an ordered list of opaque byte segments.
 *
 * Segments are compared byte-wise; there is no segment typing. The empty name
 * is a prefix of every name and is written "lci:/".
 */
class Name
{
public:
  using Segment = std::string;

  Name() = default;

  explicit
  Name(std::vector<Segment> segments)
    : m_segments(std::move(segments))
  {
  }

  Name(std::initializer_list<Segment> segments)
    : m_segments(segments)
  {
  }

  /// Parses "lci:/a/b". The scheme is optional; empty path components are
  /// dropped, so "lci:/" and "/" both yield the empty name.
  static Name
  fromUri(std::string_view uri);

  std::string
  toUri() const;

  const std::vector<Segment>&
  segments() const noexcept
  {
    return m_segments;
  }

  std::size_t
  size() const noexcept
  {
    return m_segments.size();
  }

  bool
  empty() const noexcept
  {
    return m_segments.empty();
  }

  const Segment&
  operator[](std::size_t i) const
  {
    return m_segments[i];
  }

  void
  append(Segment segment)
  {
    m_segments.push_back(std::move(segment));
  }

  /// First @p n segments (all of them if n >= size()).
  Name
  getPrefix(std::size_t n) const;

  /// True iff this name is a prefix of @p other (reflexive).
  bool
  isPrefixOf(const Name& other) const noexcept;

  /// Bytes the name occupies inside a Name TLV, excluding the outer TLV header.
  std::size_t
  encodedValueSize() const noexcept;

  friend bool
  operator==(const Name&, const Name&) = default;

  friend auto
  operator<=>(const Name&, const Name&) = default;

private:
  std::vector<Segment> m_segments;
};

inline bool
nameIsPrefix(const Name& prefix, const Name& name) noexcept
{
  return prefix.isPrefixOf(name);
}

} // namespace metis

template<>
struct std::hash<metis::Name>
{
  std::size_t
  operator()(const metis::Name& name) const noexcept;
};

#endif // METIS_WIREFMT_NAME_HPP
