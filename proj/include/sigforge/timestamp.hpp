#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sigforge {

/// Wall-clock instant at microsecond resolution, year-less as in Snort's
/// fast alert format: MM/DD-HH:MM:SS.ssssss. Ordering is lexicographic
/// on the fields, which is chronological within one capture.
struct Timestamp {
    int month = 1;
    int day = 1;
    int hour = 0;
    int minute = 0;
    int second = 0;
    std::uint32_t micros = 0;

    auto operator<=>(const Timestamp&) const = default;
};

std::string to_string(const Timestamp& ts);

/// Accepts `MM/DD-HH:MM:SS.ssssss` and tolerates a 3-letter weekday
/// wedged between day and dash (`03/31wed-18:00:32.637334`), as seen in
/// capture ground-truth listings.
std::optional<Timestamp> parse_timestamp(std::string_view text);

}  // namespace sigforge
