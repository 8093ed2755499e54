#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigforge/diag.hpp"
#include "sigforge/rule.hpp"
#include "sigforge/timestamp.hpp"

namespace sigforge {

/// One fixture record standing in for a captured packet. Fixtures carry
/// concrete protocols only (tcp/udp/icmp, never the `ip` wildcard);
/// icmp packets use port 0.
struct Packet {
    Timestamp ts;
    Protocol protocol = Protocol::tcp;
    IPv4 src_ip;
    std::uint16_t src_port = 0;
    IPv4 dst_ip;
    std::uint16_t dst_port = 0;
    std::vector<std::uint8_t> payload;

    bool operator==(const Packet&) const = default;
};

struct ParsedPackets {
    std::vector<Packet> packets;
    Diagnostics diagnostics;
};

/// JSON-lines fixture: one object per line with fields ts, proto,
/// src_ip, src_port, dst_ip, dst_port, payload_hex.
ParsedPackets parse_packets_file(const std::string& text);
std::string serialize_packet(const Packet& packet);
std::string serialize_packets_file(const std::vector<Packet>& packets);

std::string hex_from_bytes(const std::vector<std::uint8_t>& bytes);

}  // namespace sigforge
