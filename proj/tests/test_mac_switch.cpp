#include <catch_amalgamated.hpp>

#include "railpon/mac_table.hpp"
#include "railpon/time.hpp"

using namespace railpon;

namespace {
constexpr Nanos kAging = 20 * kNanosPerSec;
constexpr MacAddr kMac = 0x020000000001ull;

WhitelistPolicy window3(std::vector<int> win) {
  WhitelistPolicy p;
  p.mode = WhitelistMode::window3;
  p.window = std::move(win);
  return p;
}

WhitelistPolicy strict() {
  WhitelistPolicy p;
  p.mode = WhitelistMode::strict_antispoofing;
  return p;
}
}  // namespace

TEST_CASE("first frame learns a fresh binding") {
  MacTable t(kAging);
  CHECK(t.learn(kMac, 1, 0, window3({1, 2, 3})) == LearnOutcome::learned);
  REQUIRE(t.find(kMac));
  CHECK(t.find(kMac)->onu == 1);
}

TEST_CASE("window3 permits a MAC move inside the window") {
  MacTable t(kAging);
  t.learn(kMac, 1, 0, window3({1, 2, 3}));
  CHECK(t.learn(kMac, 2, 100, window3({1, 2, 3})) == LearnOutcome::moved);
  CHECK(t.find(kMac)->onu == 2);
}

TEST_CASE("a move to an ONU outside the window is rejected") {
  MacTable t(kAging);
  t.learn(kMac, 1, 0, window3({1, 2, 3}));
  CHECK(t.learn(kMac, 5, 100, window3({1, 2, 3})) == LearnOutcome::rejected);
  CHECK(t.find(kMac)->onu == 1);  // binding untouched
}

TEST_CASE("strict anti-spoofing rejects every move until the entry ages out") {
  MacTable t(kAging);
  t.learn(kMac, 1, 0, strict());
  CHECK(t.learn(kMac, 2, kAging - 1, strict()) == LearnOutcome::rejected);
  // At exactly the aging time the old entry counts as gone.
  CHECK(t.learn(kMac, 2, kAging, strict()) == LearnOutcome::learned);
  CHECK(t.find(kMac)->onu == 2);
}

TEST_CASE("age scan expires at exactly the aging time") {
  MacTable t(kAging);
  t.learn(kMac, 1, 1'000, window3({1}));
  CHECK(t.age_scan(1'000 + kAging - 1).empty());  // 19.999999 s: retained
  auto expired = t.age_scan(1'000 + kAging);
  REQUIRE(expired.size() == 1);
  CHECK(expired[0] == kMac);
  CHECK(t.size() == 0);
}

TEST_CASE("age scan on an empty table") {
  MacTable t(kAging);
  CHECK(t.age_scan(123).empty());
}

TEST_CASE("forwarding: unicast when known, flood when unknown or expired") {
  MacTable t(kAging);
  const std::vector<int> flood{1, 2, 3};
  CHECK(t.forward(kMac, 0, flood) == flood);
  t.learn(kMac, 2, 0, window3(flood));
  CHECK(t.forward(kMac, 10, flood) == std::vector<int>{2});
  // After expiry the destination floods again, even before a scan runs.
  CHECK(t.forward(kMac, kAging, flood) == flood);
  t.age_scan(kAging);
  CHECK(t.forward(kMac, kAging, flood) == flood);
}

TEST_CASE("deferred move target suppresses relearning but keeps the frame") {
  MacTable t(kAging);
  auto pol = window3({1, 2});
  t.learn(kMac, 1, 0, pol);
  pol.deferred_move_target = 2;
  CHECK(t.learn(kMac, 2, 100, pol) == LearnOutcome::deferred);
  CHECK(t.find(kMac)->onu == 1);
  pol.deferred_move_target.reset();
  CHECK(t.learn(kMac, 2, 200, pol) == LearnOutcome::moved);
}

TEST_CASE("refresh keeps the same port and bumps last_seen") {
  MacTable t(kAging);
  t.learn(kMac, 1, 0, window3({1, 2}));
  CHECK(t.learn(kMac, 1, 5'000, window3({1, 2})) == LearnOutcome::refreshed);
  CHECK(t.find(kMac)->last_seen == 5'000);
}

TEST_CASE("mac address parse and format round-trip") {
  auto mac = parse_mac("02:00:5e:10:00:ff");
  REQUIRE(mac);
  CHECK(format_mac(*mac) == "02:00:5e:10:00:ff");
  CHECK_FALSE(parse_mac("02:00:5e:10:00"));
  CHECK_FALSE(parse_mac("02:00:5e:10:00:zz"));
}
