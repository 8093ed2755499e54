#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigforge/diag.hpp"
#include "sigforge/rule.hpp"
#include "sigforge/timestamp.hpp"

namespace sigforge {

/// One detection event in fast alert format:
///   MM/DD-HH:MM:SS.ssssss [**] [1:sid:rev] msg [**] [Priority: n] {PROTO} sip:sport -> dip:dport
/// sid and rev render as 0 when absent, and 0 parses back to absent, so
/// round trips are exact for the Snort-conventional sid/rev >= 1.
struct Alert {
    Timestamp ts;
    std::optional<std::uint32_t> sid;
    std::optional<std::uint32_t> rev;
    std::string msg;
    std::uint32_t priority = 1;
    Protocol protocol = Protocol::tcp;
    IPv4 src_ip;
    std::uint16_t src_port = 0;
    IPv4 dst_ip;
    std::uint16_t dst_port = 0;

    bool operator==(const Alert&) const = default;
};

/// Identity of the packet an alert fired on. Two alerts refer to the
/// same packet exactly when their keys compare equal.
struct PacketKey {
    Timestamp ts;
    Protocol protocol = Protocol::tcp;
    IPv4 src_ip;
    std::uint16_t src_port = 0;
    IPv4 dst_ip;
    std::uint16_t dst_port = 0;

    auto operator<=>(const PacketKey&) const = default;
};

PacketKey key_of(const Alert& alert);

std::string format_alert(const Alert& alert);
std::optional<Alert> parse_alert_line(const std::string& line, std::string& error);

struct ParsedAlerts {
    std::vector<Alert> alerts;
    Diagnostics diagnostics;
};
ParsedAlerts parse_alert_file(const std::string& text);
std::string format_alert_file(const std::vector<Alert>& alerts);

}  // namespace sigforge
