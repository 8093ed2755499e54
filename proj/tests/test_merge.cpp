#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "sigforge/merge.hpp"
#include "support/gen.hpp"

using namespace sigforge;
using sigforge::testing::key_from_id;
using sigforge::testing::random_alert_stream;
using sigforge::testing::Rng;

namespace {

Alert alert_at(std::uint32_t key_id, const std::string& msg) {
    PacketKey key = key_from_id(key_id);
    Alert a;
    a.ts = key.ts;
    a.protocol = key.protocol;
    a.src_ip = key.src_ip;
    a.src_port = key.src_port;
    a.dst_ip = key.dst_ip;
    a.dst_port = key.dst_port;
    a.sid = 1;
    a.msg = msg;
    return a;
}

}  // namespace

TEST_CASE("generalised alerts on fresh packets pass through") {
    Alert g = alert_at(1, "gen");
    auto result = merge({}, {g});
    CHECK(result.merged == std::vector<Alert>{g});
    CHECK(result.fuzz == std::vector<Alert>{g});
    CHECK(result.rejected_fuzz.empty());
}

TEST_CASE("an original alert on the same packet displaces the generalised one") {
    Alert o = alert_at(1, "orig");
    Alert g = alert_at(1, "gen");
    auto result = merge({o}, {g});
    CHECK(result.merged == std::vector<Alert>{o});
    CHECK(result.fuzz.empty());
    CHECK(result.rejected_fuzz == std::vector<Alert>{g});
}

TEST_CASE("mixed keys split the generalised stream") {
    Alert o1 = alert_at(100, "orig");
    Alert g_fresh = alert_at(200, "gen fresh");
    Alert g_dup = alert_at(100, "gen dup");

    auto result = merge({o1}, {g_fresh, g_dup});
    CHECK(result.fuzz == std::vector<Alert>{g_fresh});
    CHECK(result.rejected_fuzz == std::vector<Alert>{g_dup});
    REQUIRE(result.merged.size() == 2);
    CHECK(std::is_sorted(result.merged.begin(), result.merged.end(),
                         [](const Alert& a, const Alert& b) { return a.ts < b.ts; }));
}

TEST_CASE("merged output is chronological with originals first on ties") {
    Alert o = alert_at(0, "orig");
    Alert g_same_ts = alert_at(85, "gen");  // id 85 shares ts fields with id 0
    REQUIRE(o.ts == g_same_ts.ts);          // ties by construction
    REQUIRE(key_of(o) != key_of(g_same_ts));

    auto result = merge({o}, {g_same_ts});
    REQUIRE(result.merged.size() == 2);
    CHECK(result.merged[0].msg == "orig");
    CHECK(result.merged[1].msg == "gen");

    // and the reverse construction: an earlier generalised alert leads
    Alert g_early = alert_at(85, "gen early");
    Alert o_late = alert_at(1, "orig late");
    REQUIRE(g_early.ts < o_late.ts);
    result = merge({o_late}, {g_early});
    CHECK(result.merged[0].msg == "gen early");
    CHECK(result.merged[1].msg == "orig late");
}

TEST_CASE("duplicate keys inside one stream all survive") {
    // two original alerts for the same packet (all-matches input) stay,
    // and both displace the generalised alert
    Alert o1 = alert_at(1, "first rule");
    Alert o2 = alert_at(1, "second rule");
    Alert g = alert_at(1, "gen");
    auto result = merge({o1, o2}, {g});
    CHECK(result.merged == std::vector<Alert>{o1, o2});
    CHECK(result.rejected_fuzz == std::vector<Alert>{g});

    // likewise two generalised alerts on one fresh packet both pass
    auto result2 = merge({}, {g, g});
    CHECK(result2.fuzz == std::vector<Alert>{g, g});
}

TEST_CASE("merge is deterministic") {
    Rng rng(99);
    auto original = random_alert_stream(rng, 200, 300, "orig");
    auto generalised = random_alert_stream(rng, 200, 300, "gen");
    auto once = merge(original, generalised);
    auto twice = merge(original, generalised);
    CHECK(once.merged == twice.merged);
    CHECK(once.fuzz == twice.fuzz);
    CHECK(once.rejected_fuzz == twice.rejected_fuzz);
}

TEST_CASE("random streams satisfy the merge contract") {
    Rng rng(20250831);
    for (int round = 0; round < 30; ++round) {
        auto original = random_alert_stream(rng, 150, 220, "orig");
        auto generalised = random_alert_stream(rng, 150, 220, "gen");
        auto result = merge(original, generalised);

        // fuzz and rejected_fuzz partition the generalised stream in order
        CHECK(result.fuzz.size() + result.rejected_fuzz.size() == generalised.size());
        std::size_t fi = 0, ri = 0;
        std::set<PacketKey> original_keys;
        for (const Alert& a : original) original_keys.insert(key_of(a));
        for (const Alert& g : generalised) {
            if (original_keys.contains(key_of(g))) {
                REQUIRE(ri < result.rejected_fuzz.size());
                CHECK(result.rejected_fuzz[ri++] == g);
            } else {
                REQUIRE(fi < result.fuzz.size());
                CHECK(result.fuzz[fi++] == g);
            }
        }

        // merged is exactly originals plus fuzz, sorted by time, stable
        CHECK(result.merged.size() == original.size() + result.fuzz.size());
        CHECK(std::is_sorted(result.merged.begin(), result.merged.end(),
                             [](const Alert& a, const Alert& b) { return a.ts < b.ts; }));

        std::multiset<std::string> want, got;
        for (const Alert& a : original) want.insert(format_alert(a));
        for (const Alert& a : result.fuzz) want.insert(format_alert(a));
        for (const Alert& a : result.merged) got.insert(format_alert(a));
        CHECK(want == got);

        // among equal timestamps no generalised alert precedes an original
        for (std::size_t i = 1; i < result.merged.size(); ++i) {
            const Alert& prev = result.merged[i - 1];
            const Alert& cur = result.merged[i];
            if (prev.ts == cur.ts) {
                bool prev_gen = prev.msg.starts_with("gen");
                bool cur_orig = cur.msg.starts_with("orig");
                CHECK_FALSE((prev_gen && cur_orig));
            }
        }
    }
}
