#include "sigforge/summary.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

namespace sigforge {

namespace {

bool entry_before(const SummaryEntry& a, const SummaryEntry& b) {
    if (a.count != b.count) return a.count > b.count;
    std::uint64_t sid_a = a.sid ? *a.sid : std::uint64_t{1} << 32;
    std::uint64_t sid_b = b.sid ? *b.sid : std::uint64_t{1} << 32;
    if (sid_a != sid_b) return sid_a < sid_b;
    return a.msg < b.msg;
}

std::string right_align(const std::string& text, std::size_t width) {
    return text.size() >= width ? text : std::string(width - text.size(), ' ') + text;
}

void render_entry_table(std::ostringstream& out, const std::vector<SummaryEntry>& entries) {
    out << "  " << right_align("COUNT", 8) << "  " << right_align("SID", 8) << "  MSG\n";
    for (const auto& e : entries) {
        out << "  " << right_align(std::to_string(e.count), 8) << "  "
            << right_align(e.sid ? std::to_string(*e.sid) : "-", 8) << "  " << e.msg << "\n";
    }
}

nlohmann::json entries_to_json(const std::vector<SummaryEntry>& entries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json obj;
        if (e.sid) {
            obj["sid"] = *e.sid;
        } else {
            obj["sid"] = nullptr;
        }
        obj["msg"] = e.msg;
        obj["count"] = e.count;
        arr.push_back(std::move(obj));
    }
    return arr;
}

}  // namespace

SummaryReport summarize(const std::vector<Alert>& alerts,
                        std::optional<std::uint64_t> max_frequency) {
    SummaryReport report;
    report.total_alerts = alerts.size();

    std::map<std::pair<std::optional<std::uint32_t>, std::string>, std::uint64_t> by_alert;
    std::map<std::string, std::uint64_t> by_method;
    for (const auto& alert : alerts) {
        ++by_alert[{alert.sid, alert.msg}];
        auto split = split_tagged_msg(alert.msg);
        bool untagged = split.code.empty() && split.tag && split.tag->kind == GenTag::Kind::original;
        ++by_method[untagged ? "original" : split.code];
    }

    for (auto& [key, count] : by_alert) {
        SummaryEntry entry{key.first, key.second, count};
        if (max_frequency && count > *max_frequency) {
            report.suppressed.push_back(std::move(entry));
        } else {
            report.per_alert.push_back(std::move(entry));
        }
    }
    std::sort(report.per_alert.begin(), report.per_alert.end(), entry_before);
    std::sort(report.suppressed.begin(), report.suppressed.end(), entry_before);

    for (auto& [method, count] : by_method) report.per_method.push_back({method, count});
    std::sort(report.per_method.begin(), report.per_method.end(),
              [](const MethodCount& a, const MethodCount& b) {
                  if (a.count != b.count) return a.count > b.count;
                  return a.method < b.method;
              });
    return report;
}

std::string render_text(const SummaryReport& report) {
    std::ostringstream out;
    out << "Alert summary: " << report.total_alerts << " alerts, " << report.per_alert.size()
        << " distinct";
    if (!report.suppressed.empty()) {
        out << " (" << report.suppressed.size() << " suppressed as noise)";
    }
    out << "\n\n";

    out << "Per alert:\n";
    render_entry_table(out, report.per_alert);

    std::vector<SummaryEntry> rare;
    for (const auto& e : report.per_alert) {
        if (e.count < kLowFrequencyCeiling) rare.push_back(e);
    }
    if (!rare.empty()) {
        out << "\nLow-frequency alerts (count < " << kLowFrequencyCeiling
            << ", often the interesting ones):\n";
        render_entry_table(out, rare);
    }

    if (!report.suppressed.empty()) {
        out << "\nSuppressed by frequency cutoff:\n";
        render_entry_table(out, report.suppressed);
    }

    out << "\nPer generalisation method:\n";
    out << "  " << right_align("COUNT", 8) << "  METHOD\n";
    for (const auto& m : report.per_method) {
        out << "  " << right_align(std::to_string(m.count), 8) << "  " << m.method << "\n";
    }
    return out.str();
}

std::string render_json(const SummaryReport& report) {
    nlohmann::json obj;
    obj["total_alerts"] = report.total_alerts;
    obj["per_alert"] = entries_to_json(report.per_alert);
    obj["suppressed"] = entries_to_json(report.suppressed);
    nlohmann::json methods = nlohmann::json::array();
    for (const auto& m : report.per_method) {
        methods.push_back({{"method", m.method}, {"count", m.count}});
    }
    obj["per_method"] = std::move(methods);
    return obj.dump(2) + "\n";
}

}  // namespace sigforge
