#include "metis/io/interfaces.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <ifaddrs.h>
#include <linux/if_packet.h>
#include <map>
#include <net/if.h>
#include <netinet/in.h>
#include <sys/ioctl.h>
#include <unistd.h>

namespace metis {

namespace {

unsigned
queryMtu(const std::string& name)
{
  int fd = ::socket(AF_INET, SOCK_DGRAM | SOCK_CLOEXEC, 0);
  if (fd < 0) {
    return 0;
  }
  ifreq request{};
  name.copy(request.ifr_name, IFNAMSIZ - 1);
  unsigned mtu = 0;
  if (::ioctl(fd, SIOCGIFMTU, &request) == 0) {
    mtu = static_cast<unsigned>(request.ifr_mtu);
  }
  ::close(fd);
  return mtu;
}

std::string
renderAddress(const ifaddrs* entry)
{
  const auto* sa = entry->ifa_addr;
  if (sa->sa_family == AF_PACKET) {
    const auto* ll = reinterpret_cast<const sockaddr_ll*>(sa);
    std::string text = "link://";
    for (int i = 0; i < ll->sll_halen; ++i) {
      text += fmt::format("{}{:02x}", i == 0 ? "" : "-", ll->sll_addr[i]);
    }
    return text;
  }
  socklen_t length = sa->sa_family == AF_INET ? sizeof(sockaddr_in) : sizeof(sockaddr_in6);
  auto address = Address::fromSockaddr(sa, length);
  return address ? address->toString() : std::string{};
}

} // namespace

std::vector<InterfaceInfo>
SystemInterfaceProvider::interfaces() const
{
  ifaddrs* list = nullptr;
  if (::getifaddrs(&list) != 0) {
    return {};
  }

  std::map<unsigned, InterfaceInfo> byIndex;
  for (auto* entry = list; entry != nullptr; entry = entry->ifa_next) {
    unsigned index = ::if_nametoindex(entry->ifa_name);
    auto& info = byIndex[index];
    if (info.name.empty()) {
      info.index = index;
      info.name = entry->ifa_name;
      info.loopback = entry->ifa_flags & IFF_LOOPBACK;
      info.multicast = entry->ifa_flags & IFF_MULTICAST;
      info.mtu = queryMtu(info.name);
    }
    if (entry->ifa_addr == nullptr) {
      continue;
    }
    auto family = entry->ifa_addr->sa_family;
    if (family != AF_INET && family != AF_INET6 && family != AF_PACKET) {
      continue;
    }
    auto rendered = renderAddress(entry);
    if (!rendered.empty()) {
      info.addresses.push_back(std::move(rendered));
    }
  }
  ::freeifaddrs(list);

  std::vector<InterfaceInfo> result;
  for (auto& [index, info] : byIndex) {
    // link-layer address first, the way the interface list is usually read
    std::stable_partition(info.addresses.begin(), info.addresses.end(),
                          [] (const std::string& a) { return a.starts_with("link://"); });
    result.push_back(std::move(info));
  }
  return result;
}

unsigned
interfaceIndexFor(const Address& address)
{
  if (address.isLocalPath() || address.isWildcard()) {
    return 0;
  }

  ifaddrs* list = nullptr;
  if (::getifaddrs(&list) != 0) {
    return 0;
  }
  unsigned index = 0;
  for (auto* entry = list; entry != nullptr && index == 0; entry = entry->ifa_next) {
    if (entry->ifa_addr == nullptr || entry->ifa_addr->sa_family != address.family()) {
      continue;
    }
    socklen_t length = address.family() == AF_INET ? sizeof(sockaddr_in) : sizeof(sockaddr_in6);
    auto candidate = Address::fromSockaddr(entry->ifa_addr, length);
    if (candidate && candidate->hostString() == address.hostString()) {
      index = ::if_nametoindex(entry->ifa_name);
    }
  }
  ::freeifaddrs(list);
  return index;
}

} // namespace metis
