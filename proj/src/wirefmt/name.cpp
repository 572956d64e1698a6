#include "metis/wirefmt/name.hpp"

#include <algorithm>

namespace metis {

namespace {

constexpr std::string_view kScheme = "lci:";
constexpr std::size_t kTlvHeaderSize = 4;

} // namespace

Name
Name::fromUri(std::string_view uri)
{
  if (uri.starts_with(kScheme)) {
    uri.remove_prefix(kScheme.size());
  }

  Name name;
  while (!uri.empty()) {
    auto slash = uri.find('/');
    auto component = uri.substr(0, slash);
    if (!component.empty()) {
      name.append(std::string(component));
    }
    if (slash == std::string_view::npos) {
      break;
    }
    uri.remove_prefix(slash + 1);
  }
  return name;
}

std::string
Name::toUri() const
{
  std::string uri(kScheme);
  uri += '/';
  for (std::size_t i = 0; i < m_segments.size(); ++i) {
    if (i > 0) {
      uri += '/';
    }
    uri += m_segments[i];
  }
  return uri;
}

Name
Name::getPrefix(std::size_t n) const
{
  n = std::min(n, m_segments.size());
  return Name(std::vector<Segment>(m_segments.begin(), m_segments.begin() + n));
}

bool
Name::isPrefixOf(const Name& other) const noexcept
{
  if (m_segments.size() > other.m_segments.size()) {
    return false;
  }
  return std::equal(m_segments.begin(), m_segments.end(), other.m_segments.begin());
}

std::size_t
Name::encodedValueSize() const noexcept
{
  std::size_t total = 0;
  for (const auto& segment : m_segments) {
    total += kTlvHeaderSize + segment.size();
  }
  return total;
}

} // namespace metis

std::size_t
std::hash<metis::Name>::operator()(const metis::Name& name) const noexcept
{
  std::size_t seed = name.size();
  std::hash<std::string> hasher;
  for (const auto& segment : name.segments()) {
    seed ^= hasher(segment) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  }
  return seed;
}
