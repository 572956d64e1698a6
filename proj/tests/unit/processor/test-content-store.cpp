#include "metis/processor/content-store.hpp"

#include "../../common/oracles.hpp"
#include "../test-helpers.hpp"

#include <gtest/gtest.h>

namespace metis::tests {
namespace {

TEST(LruContentStore, HitReturnsStoredObject)
{
  LruContentStore store(4);
  ASSERT_TRUE(store.putContent(makeObject(Name{"a"}, ConnectionId{1}, "A"), 0));
  auto hit = store.matchInterest(makeInterest(Name{"a"}, ConnectionId{2}));
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(hit->payloadAsString(), "A");
  EXPECT_FALSE(store.matchInterest(makeInterest(Name{"a", "b"}, ConnectionId{2})).has_value());
}

TEST(LruContentStore, EvictsLeastRecentlyUsed)
{
  LruContentStore store(2);
  store.putContent(makeObject(Name{"a"}, ConnectionId{1}), 0);
  store.putContent(makeObject(Name{"b"}, ConnectionId{1}), 0);
  store.matchInterest(makeInterest(Name{"a"}, ConnectionId{1}));
  store.putContent(makeObject(Name{"c"}, ConnectionId{1}), 0);
  EXPECT_EQ(store.objectCount(), 2u);
  EXPECT_EQ(store.namesByRecency(), (std::vector<Name>{Name{"c"}, Name{"a"}}));
}

TEST(LruContentStore, ReplacingSameNameDoesNotEvict)
{
  LruContentStore store(2);
  store.putContent(makeObject(Name{"a"}, ConnectionId{1}, "1"), 0);
  store.putContent(makeObject(Name{"b"}, ConnectionId{1}), 0);
  store.putContent(makeObject(Name{"a"}, ConnectionId{1}, "2"), 0);
  EXPECT_EQ(store.objectCount(), 2u);
  EXPECT_EQ(store.matchInterest(makeInterest(Name{"a"}, ConnectionId{1}))->payloadAsString(), "2");
}

TEST(LruContentStore, ZeroCapacityDisables)
{
  LruContentStore store(0);
  EXPECT_FALSE(store.putContent(makeObject(Name{"a"}, ConnectionId{1}), 0));
  EXPECT_FALSE(store.matchInterest(makeInterest(Name{"a"}, ConnectionId{1})).has_value());
  EXPECT_EQ(store.objectCount(), 0u);
}

TEST(LruContentStore, RejectsNonObjects)
{
  LruContentStore store(2);
  EXPECT_FALSE(store.putContent(makeInterest(Name{"a"}, ConnectionId{1}), 0));
}

TEST(LruContentStore, RemoveContent)
{
  LruContentStore store(2);
  auto object = makeObject(Name{"a"}, ConnectionId{1});
  store.putContent(object, 0);
  EXPECT_TRUE(store.removeContent(object));
  EXPECT_FALSE(store.removeContent(object));
  EXPECT_EQ(store.objectCount(), 0u);
}

TEST(Property, LruMatchesReferenceModel)
{
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> op(0, 1);
  for (std::size_t capacity : {1u, 2u, 3u, 8u, 0u}) {
    for (int trial = 0; trial < 100; ++trial) {
      LruContentStore store(capacity);
      ReferenceLru model(capacity);
      for (int step = 0; step < 100; ++step) {
        auto name = randomName(rng, 2, 3);
        if (op(rng) == 0) {
          auto payload = std::to_string(step);
          store.putContent(makeObject(name, ConnectionId{1}, payload), 0);
          model.put(name, payload);
        }
        else {
          auto got = store.matchInterest(makeInterest(name, ConnectionId{1}));
          auto expected = model.match(name);
          ASSERT_EQ(got.has_value(), expected.has_value());
          if (got) {
            EXPECT_EQ(got->payloadAsString(), *expected);
          }
        }
        ASSERT_LE(store.objectCount(), capacity);
        ASSERT_EQ(store.namesByRecency(), model.names());
      }
    }
  }
}

} // namespace
} // namespace metis::tests
