#include "metis/io/address.hpp"
#include "metis/io/io-error.hpp"

#include <gtest/gtest.h>

namespace metis::tests {
namespace {

TEST(Address, RendersInet4)
{
  auto address = Address::fromIp("127.0.0.1", 9695);
  ASSERT_TRUE(address.has_value());
  EXPECT_EQ(address->toString(), "inet4://127.0.0.1:9695");
  EXPECT_EQ(address->hostString(), "127.0.0.1");
  EXPECT_EQ(address->port(), 9695);
  EXPECT_EQ(address->family(), AF_INET);
  EXPECT_TRUE(address->isLoopback());
  EXPECT_FALSE(address->isWildcard());
}

TEST(Address, RendersInet6)
{
  auto address = Address::fromIp("::1", 80);
  ASSERT_TRUE(address.has_value());
  EXPECT_EQ(address->toString(), "inet6://[::1%0]:80");
  EXPECT_TRUE(address->isLoopback());
  EXPECT_TRUE(Address::fromIp("::", 1)->isWildcard());
  EXPECT_TRUE(Address::fromIp("0.0.0.0", 1)->isWildcard());
}

TEST(Address, RendersLocal)
{
  auto address = Address::local("/tmp/metis.sock");
  EXPECT_EQ(address.toString(), "local:///tmp/metis.sock");
  EXPECT_TRUE(address.isLocalPath());
  EXPECT_EQ(address.family(), AF_UNIX);
}

TEST(Address, RejectsHostnamesInFromIp)
{
  EXPECT_FALSE(Address::fromIp("example", 1).has_value());
  EXPECT_FALSE(Address::fromIp("300.1.1.1", 1).has_value());
}

TEST(Address, ResolveNumericAndFailure)
{
  EXPECT_EQ(Address::resolve("10.0.0.1", 5), *Address::fromIp("10.0.0.1", 5));
  try {
    Address::resolve("no-such-host.invalid", 5);
    FAIL() << "expected IoError";
  }
  catch (const IoError& e) {
    EXPECT_EQ(e.code(), IoErrorCode::BadAddress);
  }
}

TEST(Address, SockaddrRoundTrip)
{
  for (const auto& address : {*Address::fromIp("192.0.2.7", 1234), *Address::fromIp("2001:db8::5", 77),
                              Address::local("/tmp/x")}) {
    sockaddr_storage storage{};
    auto length = address.toSockaddr(storage);
    auto back = Address::fromSockaddr(reinterpret_cast<sockaddr*>(&storage), length);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, address);
  }
}

TEST(Address, OrderingIsTotal)
{
  auto a = *Address::fromIp("10.0.0.1", 1);
  auto b = *Address::fromIp("10.0.0.1", 2);
  EXPECT_LT(a, b);
  EXPECT_NE(a, b);
  AddressPair p{a, b};
  AddressPair q{a, a};
  EXPECT_LT(q, p);
}

} // namespace
} // namespace metis::tests
