#include "sigforge/alert.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace sigforge {

namespace {

constexpr std::string_view kSep = " [**] ";

std::string proto_upper(Protocol proto) {
    std::string out = to_string(proto);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

bool consume(std::string_view& s, std::string_view prefix) {
    if (!s.starts_with(prefix)) return false;
    s.remove_prefix(prefix.size());
    return true;
}

bool read_u32(std::string_view& s, std::uint32_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p == s.data()) return false;
    s.remove_prefix(static_cast<std::size_t>(p - s.data()));
    return true;
}

bool parse_endpoint(std::string_view text, IPv4& ip, std::uint16_t& port) {
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos) return false;
    auto parsed_ip = parse_ipv4(std::string(text.substr(0, colon)));
    if (!parsed_ip) return false;
    std::string_view port_part = text.substr(colon + 1);
    std::uint32_t value = 0;
    auto [p, ec] = std::from_chars(port_part.data(), port_part.data() + port_part.size(), value);
    if (ec != std::errc() || p != port_part.data() + port_part.size() || value > 65535) {
        return false;
    }
    ip = *parsed_ip;
    port = static_cast<std::uint16_t>(value);
    return true;
}

}  // namespace

PacketKey key_of(const Alert& alert) {
    return PacketKey{alert.ts,    alert.protocol, alert.src_ip,
                     alert.src_port, alert.dst_ip,   alert.dst_port};
}

std::string format_alert(const Alert& alert) {
    std::string out = to_string(alert.ts);
    out += kSep;
    out += "[1:" + std::to_string(alert.sid.value_or(0)) + ":" +
           std::to_string(alert.rev.value_or(0)) + "] ";
    out += alert.msg;
    out += kSep;
    out += "[Priority: " + std::to_string(alert.priority) + "] ";
    out += "{" + proto_upper(alert.protocol) + "} ";
    out += to_string(alert.src_ip) + ":" + std::to_string(alert.src_port);
    out += " -> ";
    out += to_string(alert.dst_ip) + ":" + std::to_string(alert.dst_port);
    return out;
}

std::optional<Alert> parse_alert_line(const std::string& line, std::string& error) {
    std::string_view text = line;
    while (!text.empty() && (text.back() == '\r' || text.back() == '\n')) text.remove_suffix(1);

    auto first_sep = text.find(kSep);
    if (first_sep == std::string_view::npos) {
        error = "missing [**] separator";
        return std::nullopt;
    }
    Alert alert;
    auto ts = parse_timestamp(text.substr(0, first_sep));
    if (!ts) {
        error = "bad timestamp";
        return std::nullopt;
    }
    alert.ts = *ts;

    std::string_view rest = text.substr(first_sep + kSep.size());
    std::uint32_t gid = 0, sid = 0, rev = 0;
    if (!consume(rest, "[") || !read_u32(rest, gid) || !consume(rest, ":") ||
        !read_u32(rest, sid) || !consume(rest, ":") || !read_u32(rest, rev) ||
        !consume(rest, "] ")) {
        error = "bad rule identity";
        return std::nullopt;
    }
    if (sid != 0) alert.sid = sid;
    if (rev != 0) alert.rev = rev;

    auto last_sep = rest.rfind(kSep);
    if (last_sep == std::string_view::npos) {
        error = "missing second [**] separator";
        return std::nullopt;
    }
    alert.msg = std::string(rest.substr(0, last_sep));
    std::string_view tail = rest.substr(last_sep + kSep.size());

    if (!consume(tail, "[Priority: ") || !read_u32(tail, alert.priority) ||
        !consume(tail, "] {")) {
        error = "bad priority";
        return std::nullopt;
    }
    auto brace = tail.find('}');
    if (brace == std::string_view::npos) {
        error = "bad protocol";
        return std::nullopt;
    }
    std::string proto_text(tail.substr(0, brace));
    for (char& c : proto_text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto proto = protocol_from_string(proto_text);
    if (!proto) {
        error = "unknown protocol '" + proto_text + "'";
        return std::nullopt;
    }
    alert.protocol = *proto;
    tail.remove_prefix(brace + 1);
    if (!consume(tail, " ")) {
        error = "bad endpoint section";
        return std::nullopt;
    }
    auto arrow = tail.find(" -> ");
    if (arrow == std::string_view::npos) {
        error = "missing endpoint arrow";
        return std::nullopt;
    }
    if (!parse_endpoint(tail.substr(0, arrow), alert.src_ip, alert.src_port) ||
        !parse_endpoint(tail.substr(arrow + 4), alert.dst_ip, alert.dst_port)) {
        error = "bad endpoints";
        return std::nullopt;
    }
    return alert;
}

ParsedAlerts parse_alert_file(const std::string& text) {
    ParsedAlerts result;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::string error;
        auto alert = parse_alert_line(line, error);
        if (alert) {
            result.alerts.push_back(std::move(*alert));
        } else {
            result.diagnostics.push_back({lineno, error});
        }
    }
    return result;
}

std::string format_alert_file(const std::vector<Alert>& alerts) {
    std::string out;
    for (const auto& alert : alerts) {
        out += format_alert(alert);
        out += '\n';
    }
    return out;
}

}  // namespace sigforge
