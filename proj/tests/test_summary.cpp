#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <numeric>

#include "sigforge/summary.hpp"
#include "support/gen.hpp"

using namespace sigforge;
using sigforge::testing::Rng;

namespace {

void add_alerts(std::vector<Alert>& alerts, std::optional<std::uint32_t> sid,
                const std::string& msg, std::size_t count) {
    Alert a;
    a.ts = {3, 31, 12, 0, 0, 0};
    a.sid = sid;
    a.msg = msg;
    for (std::size_t i = 0; i < count; ++i) alerts.push_back(a);
}

std::uint64_t total_counted(const SummaryReport& report) {
    auto sum = [](std::uint64_t acc, const SummaryEntry& e) { return acc + e.count; };
    return std::accumulate(report.per_alert.begin(), report.per_alert.end(), 0ull, sum) +
           std::accumulate(report.suppressed.begin(), report.suppressed.end(), 0ull, sum);
}

}  // namespace

TEST_CASE("empty input yields an empty report") {
    auto report = summarize({}, std::nullopt);
    CHECK(report.total_alerts == 0);
    CHECK(report.per_alert.empty());
    CHECK(report.per_method.empty());
    CHECK(report.suppressed.empty());
}

TEST_CASE("ground-truth shaped counts order by frequency then sid") {
    std::vector<Alert> alerts;
    add_alerts(alerts, 250, "DDOS mstream handler to client", 3);
    add_alerts(alerts, 255, "DNS zone transfer TCP", 3);
    add_alerts(alerts, 323, "FINGER root query", 1);
    add_alerts(alerts, 530, "NETBIOS NT NULL session", 1);
    add_alerts(alerts, 1201, "ATTACK-RESPONSES 403 Forbidden", 10);
    add_alerts(alerts, 1377, "FTP wu-ftp bad file completion attempt [", 9);
    add_alerts(alerts, 1378, "FTP wu-ftp bad file completion attempt {", 1);

    auto report = summarize(alerts, 25);
    CHECK(report.total_alerts == 28);
    CHECK(report.suppressed.empty());  // nothing beats a cutoff of 25
    REQUIRE(report.per_alert.size() == 7);

    std::vector<std::pair<std::uint32_t, std::uint64_t>> got;
    for (const auto& e : report.per_alert) got.emplace_back(*e.sid, e.count);
    CHECK(got == std::vector<std::pair<std::uint32_t, std::uint64_t>>{
                     {1201, 10}, {1377, 9}, {250, 3}, {255, 3}, {323, 1}, {530, 1}, {1378, 1}});

    // everything here is an original alert
    REQUIRE(report.per_method.size() == 1);
    CHECK(report.per_method[0] == MethodCount{"original", 28});
}

TEST_CASE("counts above the cutoff are set aside as noise") {
    std::vector<Alert> alerts;
    add_alerts(alerts, 1, "web bug GIF", 38000);
    add_alerts(alerts, 1377, "FTP wu-ftp bad file completion attempt [", 9);

    auto report = summarize(alerts, 25);
    CHECK(report.total_alerts == 38009);
    REQUIRE(report.per_alert.size() == 1);
    CHECK(report.per_alert[0].sid == 1377u);
    REQUIRE(report.suppressed.size() == 1);
    CHECK(report.suppressed[0].count == 38000);
    CHECK(total_counted(report) == report.total_alerts);

    SUBCASE("the boundary count survives; one more does not") {
        std::vector<Alert> edge;
        add_alerts(edge, 7, "at the line", 25);
        auto r = summarize(edge, 25);
        CHECK(r.suppressed.empty());
        add_alerts(edge, 7, "at the line", 1);
        r = summarize(edge, 25);
        REQUIRE(r.suppressed.size() == 1);
        CHECK(r.suppressed[0].count == 26);
    }
    SUBCASE("no cutoff, no suppression") {
        auto r = summarize(alerts, std::nullopt);
        CHECK(r.suppressed.empty());
        CHECK(r.per_alert.size() == 2);
    }
}

TEST_CASE("grouping is by sid and msg together") {
    std::vector<Alert> alerts;
    add_alerts(alerts, 5, "one msg", 2);
    add_alerts(alerts, 5, "another msg", 3);   // same sid, different msg
    add_alerts(alerts, std::nullopt, "one msg", 4);  // same msg, no sid

    auto report = summarize(alerts, std::nullopt);
    REQUIRE(report.per_alert.size() == 3);
    CHECK(report.per_alert[0].count == 4);
    CHECK_FALSE(report.per_alert[0].sid.has_value());

    SUBCASE("sid-less entries sort after numbered ones at equal count") {
        std::vector<Alert> tie;
        add_alerts(tie, std::nullopt, "unnumbered", 2);
        add_alerts(tie, 9000, "numbered", 2);
        auto r = summarize(tie, std::nullopt);
        REQUIRE(r.per_alert.size() == 2);
        CHECK(r.per_alert[0].sid == 9000u);
        CHECK_FALSE(r.per_alert[1].sid.has_value());
    }
    SUBCASE("message breaks the remaining ties") {
        std::vector<Alert> tie;
        add_alerts(tie, 5, "bbb", 2);
        add_alerts(tie, 5, "aaa", 2);
        auto r = summarize(tie, std::nullopt);
        CHECK(r.per_alert[0].msg == "aaa");
        CHECK(r.per_alert[1].msg == "bbb");
    }
}

TEST_CASE("method counts come from the message tags") {
    std::vector<Alert> alerts;
    add_alerts(alerts, 255, "DNS zone transfer TCP", 3);
    add_alerts(alerts, 2025508, "DNS zone transfer TCP FuzzRuleId cor[0,2]", 5);
    add_alerts(alerts, 2025500, "DNS zone transfer TCP FuzzRuleId inv:sip", 2);
    add_alerts(alerts, 2025509, "DNS zone transfer TCP FuzzRuleId cor[0,2]", 1);
    // ad-hoc code spelling from hand-written rules stays verbatim
    add_alerts(alerts, std::nullopt, "Possible BugBear B Attack FuzzRuleId cor('\\|x|\\')", 1);

    auto report = summarize(alerts, std::nullopt);
    REQUIRE(report.per_method.size() == 4);
    // count desc, then method asc
    CHECK(report.per_method[0] == MethodCount{"cor[0,2]", 6});
    CHECK(report.per_method[1] == MethodCount{"original", 3});
    CHECK(report.per_method[2] == MethodCount{"inv:sip", 2});
    CHECK(report.per_method[3] == MethodCount{"cor('\\|x|\\')", 1});

    std::uint64_t method_total = 0;
    for (const auto& m : report.per_method) method_total += m.count;
    CHECK(method_total == report.total_alerts);
}

TEST_CASE("conservation holds for random streams and cutoffs") {
    Rng rng(31337);
    for (int round = 0; round < 40; ++round) {
        auto alerts = sigforge::testing::random_alert_stream(rng, 400, 500, "mix");
        std::optional<std::uint64_t> cutoff;
        if (round % 3 != 0) cutoff = static_cast<std::uint64_t>(round);
        auto report = summarize(alerts, cutoff);
        CHECK(report.total_alerts == alerts.size());
        CHECK(total_counted(report) == alerts.size());

        std::uint64_t by_method = 0;
        for (const auto& m : report.per_method) by_method += m.count;
        CHECK(by_method == alerts.size());

        for (const auto& e : report.suppressed) {
            REQUIRE(cutoff.has_value());
            CHECK(e.count > *cutoff);
        }
        for (std::size_t i = 1; i < report.per_alert.size(); ++i) {
            CHECK(report.per_alert[i - 1].count >= report.per_alert[i].count);
        }
    }
}

TEST_CASE("text report shows the tables and the noise note") {
    std::vector<Alert> alerts;
    add_alerts(alerts, 1201, "ATTACK-RESPONSES 403 Forbidden", 12);
    add_alerts(alerts, std::nullopt, "unnumbered probe", 2);
    add_alerts(alerts, 42, "noisy thing", 40);

    std::string text = render_text(summarize(alerts, 25));
    CHECK(text.find("Alert summary: 54 alerts, 2 distinct (1 suppressed as noise)") !=
          std::string::npos);
    CHECK(text.find("Per alert:") != std::string::npos);
    CHECK(text.find("Low-frequency alerts (count < 10") != std::string::npos);
    CHECK(text.find("Suppressed by frequency cutoff:") != std::string::npos);
    CHECK(text.find("Per generalisation method:") != std::string::npos);
    CHECK(text.find("unnumbered probe") != std::string::npos);
    CHECK(text.find(" - ") != std::string::npos);  // sid column placeholder
    CHECK(text.find("1201") != std::string::npos);

    // the twelve-count entry is not low-frequency; the two-count one is
    std::size_t low = text.find("Low-frequency");
    CHECK(text.find("ATTACK-RESPONSES", low) == std::string::npos);
    CHECK(text.find("unnumbered probe", low) != std::string::npos);
}

TEST_CASE("json report carries the same numbers") {
    std::vector<Alert> alerts;
    add_alerts(alerts, 255, "DNS zone transfer TCP", 3);
    add_alerts(alerts, std::nullopt, "tagged FuzzRuleId inv:dir", 2);

    auto parsed = nlohmann::json::parse(render_json(summarize(alerts, 25)));
    CHECK(parsed["total_alerts"] == 5);
    REQUIRE(parsed["per_alert"].size() == 2);
    CHECK(parsed["per_alert"][0]["sid"] == 255);
    CHECK(parsed["per_alert"][0]["count"] == 3);
    CHECK(parsed["per_alert"][1]["sid"].is_null());
    CHECK(parsed["per_alert"][1]["msg"] == "tagged FuzzRuleId inv:dir");
    CHECK(parsed["suppressed"].empty());

    bool saw_original = false, saw_inv = false;
    for (const auto& m : parsed["per_method"]) {
        if (m["method"] == "original") {
            saw_original = true;
            CHECK(m["count"] == 3);
        }
        if (m["method"] == "inv:dir") {
            saw_inv = true;
            CHECK(m["count"] == 2);
        }
    }
    CHECK(saw_original);
    CHECK(saw_inv);
}
