#include "sigforge/packet.hpp"

#include <sstream>

#include <json.hpp>

namespace sigforge {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::optional<std::vector<std::uint8_t>> bytes_from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) return std::nullopt;
    std::vector<std::uint8_t> out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
    }
    return out;
}

std::optional<Packet> packet_from_json(const nlohmann::json& obj, std::string& error) {
    Packet packet;
    if (!obj.is_object()) {
        error = "not a JSON object";
        return std::nullopt;
    }
    for (const char* field : {"ts", "proto", "src_ip", "dst_ip", "payload_hex"}) {
        if (!obj.contains(field) || !obj[field].is_string()) {
            error = std::string("missing or non-string field '") + field + "'";
            return std::nullopt;
        }
    }
    for (const char* field : {"src_port", "dst_port"}) {
        if (!obj.contains(field) || !obj[field].is_number_unsigned() ||
            obj[field].get<std::uint64_t>() > 65535) {
            error = std::string("missing or bad field '") + field + "'";
            return std::nullopt;
        }
    }
    auto ts = parse_timestamp(obj["ts"].get<std::string>());
    if (!ts) {
        error = "bad ts";
        return std::nullopt;
    }
    packet.ts = *ts;
    auto proto = protocol_from_string(obj["proto"].get<std::string>());
    if (!proto || *proto == Protocol::ip) {
        error = "bad proto (want tcp, udp, or icmp)";
        return std::nullopt;
    }
    packet.protocol = *proto;
    auto src = parse_ipv4(obj["src_ip"].get<std::string>());
    auto dst = parse_ipv4(obj["dst_ip"].get<std::string>());
    if (!src || !dst) {
        error = "bad src_ip or dst_ip";
        return std::nullopt;
    }
    packet.src_ip = *src;
    packet.dst_ip = *dst;
    packet.src_port = static_cast<std::uint16_t>(obj["src_port"].get<std::uint64_t>());
    packet.dst_port = static_cast<std::uint16_t>(obj["dst_port"].get<std::uint64_t>());
    auto payload = bytes_from_hex(obj["payload_hex"].get<std::string>());
    if (!payload) {
        error = "bad payload_hex";
        return std::nullopt;
    }
    if (payload->size() > 65535) {
        error = "payload longer than 65535 bytes";
        return std::nullopt;
    }
    packet.payload = std::move(*payload);
    return packet;
}

}  // namespace

std::string hex_from_bytes(const std::vector<std::uint8_t>& bytes) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 0xf];
    }
    return out;
}

ParsedPackets parse_packets_file(const std::string& text) {
    ParsedPackets result;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
        if (blank) continue;
        std::string error;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded()) {
            result.diagnostics.push_back({lineno, "invalid JSON"});
            continue;
        }
        auto packet = packet_from_json(obj, error);
        if (packet) {
            result.packets.push_back(std::move(*packet));
        } else {
            result.diagnostics.push_back({lineno, error});
        }
    }
    return result;
}

std::string serialize_packet(const Packet& packet) {
    nlohmann::json obj;
    obj["ts"] = to_string(packet.ts);
    obj["proto"] = to_string(packet.protocol);
    obj["src_ip"] = to_string(packet.src_ip);
    obj["src_port"] = packet.src_port;
    obj["dst_ip"] = to_string(packet.dst_ip);
    obj["dst_port"] = packet.dst_port;
    obj["payload_hex"] = hex_from_bytes(packet.payload);
    return obj.dump();
}

std::string serialize_packets_file(const std::vector<Packet>& packets) {
    std::string out;
    for (const auto& packet : packets) {
        out += serialize_packet(packet);
        out += '\n';
    }
    return out;
}

}  // namespace sigforge
