#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigforge/alert.hpp"

namespace sigforge {

struct SummaryEntry {
    std::optional<std::uint32_t> sid;
    std::string msg;
    std::uint64_t count = 0;

    bool operator==(const SummaryEntry&) const = default;
};

struct MethodCount {
    std::string method;  // tag code, or "original" for untagged alerts
    std::uint64_t count = 0;

    bool operator==(const MethodCount&) const = default;
};

/// Frequency summary of an alert file. per_alert counts + suppressed
/// counts always sum to total_alerts.
struct SummaryReport {
    std::vector<SummaryEntry> per_alert;   // count desc, then sid asc
    std::vector<MethodCount> per_method;   // count desc, then method asc
    std::vector<SummaryEntry> suppressed;  // entries with count > cutoff
    std::uint64_t total_alerts = 0;
};

/// Groups alerts by (sid, msg); entries whose count exceeds
/// max_frequency (when given) are moved to suppressed as likely noise.
SummaryReport summarize(const std::vector<Alert>& alerts,
                        std::optional<std::uint64_t> max_frequency);

/// The count below which an entry lands in the low-frequency section of
/// the text report; rare alerts are the interesting ones.
inline constexpr std::uint64_t kLowFrequencyCeiling = 10;

std::string render_text(const SummaryReport& report);
std::string render_json(const SummaryReport& report);

}  // namespace sigforge
