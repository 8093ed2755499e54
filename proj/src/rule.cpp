#include "sigforge/rule.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace sigforge {

std::string to_string(Action a) {
    switch (a) {
        case Action::alert: return "alert";
        case Action::log: return "log";
        case Action::pass: return "pass";
        case Action::activate: return "activate";
        case Action::dynamic: return "dynamic";
    }
    return "alert";
}

std::string to_string(Protocol p) {
    switch (p) {
        case Protocol::tcp: return "tcp";
        case Protocol::udp: return "udp";
        case Protocol::icmp: return "icmp";
        case Protocol::ip: return "ip";
    }
    return "ip";
}

std::string to_string(Direction d) {
    return d == Direction::to_dest ? "->" : "<>";
}

std::optional<Action> action_from_string(const std::string& s) {
    if (s == "alert") return Action::alert;
    if (s == "log") return Action::log;
    if (s == "pass") return Action::pass;
    if (s == "activate") return Action::activate;
    if (s == "dynamic") return Action::dynamic;
    return std::nullopt;
}

std::optional<Protocol> protocol_from_string(const std::string& s) {
    if (s == "tcp") return Protocol::tcp;
    if (s == "udp") return Protocol::udp;
    if (s == "icmp") return Protocol::icmp;
    if (s == "ip") return Protocol::ip;
    return std::nullopt;
}

std::optional<IPv4> parse_ipv4(const std::string& text) {
    std::uint32_t bits = 0;
    const char* p = text.data();
    const char* end = p + text.size();
    for (int octet = 0; octet < 4; ++octet) {
        unsigned value = 0;
        auto [next, ec] = std::from_chars(p, end, value);
        if (ec != std::errc() || next == p || value > 255) return std::nullopt;
        bits = (bits << 8) | value;
        p = next;
        if (octet < 3) {
            if (p == end || *p != '.') return std::nullopt;
            ++p;
        }
    }
    if (p != end) return std::nullopt;
    return IPv4{bits};
}

std::string to_string(IPv4 ip) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", (ip.bits >> 24) & 0xff, (ip.bits >> 16) & 0xff,
                  (ip.bits >> 8) & 0xff, ip.bits & 0xff);
    return buf;
}

bool CidrBlock::contains(IPv4 ip) const {
    if (prefix <= 0) return true;
    const std::uint32_t mask = prefix >= 32 ? 0xffffffffu : ~(0xffffffffu >> prefix);
    return (ip.bits & mask) == (base.bits & mask);
}

AddrSpec AddrSpec::make_var(std::string name, bool neg) {
    AddrSpec s;
    s.kind = Kind::variable;
    s.var_name = std::move(name);
    s.negated = neg;
    return s;
}

AddrSpec AddrSpec::make_cidr(std::vector<CidrBlock> blocks, bool neg) {
    AddrSpec s;
    s.kind = Kind::cidr;
    s.blocks = std::move(blocks);
    s.negated = neg;
    return s;
}

PortSpec PortSpec::make_var(std::string name, bool neg) {
    PortSpec s;
    s.kind = Kind::variable;
    s.var_name = std::move(name);
    s.negated = neg;
    return s;
}

PortSpec PortSpec::make_single(std::uint16_t port, bool neg) {
    PortSpec s;
    s.kind = Kind::single;
    s.lo = s.hi = port;
    s.negated = neg;
    return s;
}

PortSpec PortSpec::make_range(std::uint16_t lo, std::uint16_t hi, bool neg) {
    PortSpec s;
    s.kind = Kind::range;
    s.lo = lo;
    s.hi = hi;
    s.negated = neg;
    return s;
}

PortSpec PortSpec::make_from(std::uint16_t lo, bool neg) {
    PortSpec s;
    s.kind = Kind::from;
    s.lo = lo;
    s.hi = 65535;
    s.negated = neg;
    return s;
}

PortSpec PortSpec::make_to(std::uint16_t hi, bool neg) {
    PortSpec s;
    s.kind = Kind::to;
    s.lo = 0;
    s.hi = hi;
    s.negated = neg;
    return s;
}

bool PortSpec::base_contains(std::uint16_t port) const {
    switch (kind) {
        case Kind::any: return true;
        case Kind::variable: return false;
        case Kind::single: return port == lo;
        case Kind::range:
        case Kind::from:
        case Kind::to: return port >= lo && port <= hi;
    }
    return false;
}

Pattern pattern_from_text(std::string_view text) {
    Pattern p;
    p.reserve(text.size());
    for (char c : text) p.push_back(pattern_lit(static_cast<std::uint8_t>(c)));
    return p;
}

namespace {

bool needs_escape(std::uint8_t b) {
    return b == '"' || b == '\\' || b == ';' || b == '|';
}

char hex_digit(unsigned v) {
    return static_cast<char>(v < 10 ? '0' + v : 'a' + (v - 10));
}

}  // namespace

std::string render_pattern(const Pattern& pattern) {
    const std::size_t n = pattern.size();
    // Hex-spelled and non-printable literals go inside |..| runs. A
    // wildcard renders inside a run whenever it touches one through any
    // chain of adjacent wildcards; otherwise it stands alone as |?|.
    std::vector<bool> in_hex(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const PatternByte& pb = pattern[i];
        in_hex[i] = pb.byte && (pb.hex || !renders_bare(*pb.byte));
    }
    for (std::size_t i = 1; i < n; ++i)
        if (pattern[i].is_wildcard() && in_hex[i - 1]) in_hex[i] = true;
    for (std::size_t i = n; i-- > 1;)
        if (pattern[i - 1].is_wildcard() && in_hex[i]) in_hex[i - 1] = true;

    std::string out;
    std::size_t i = 0;
    while (i < n) {
        if (in_hex[i]) {
            out += '|';
            bool first = true;
            for (; i < n && in_hex[i]; ++i) {
                if (!first) out += ' ';
                first = false;
                if (pattern[i].byte) {
                    out += hex_digit(*pattern[i].byte >> 4);
                    out += hex_digit(*pattern[i].byte & 0xf);
                } else {
                    out += "|?|";
                }
            }
            out += '|';
        } else if (pattern[i].is_wildcard()) {
            out += "|?|";
            ++i;
        } else {
            const std::uint8_t b = *pattern[i].byte;
            if (needs_escape(b)) out += '\\';
            out += static_cast<char>(b);
            ++i;
        }
    }
    return out;
}

std::string tagcode(const GenTag& tag) {
    std::ostringstream os;
    switch (tag.kind) {
        case GenTag::Kind::original: return "";
        case GenTag::Kind::inv_src_port: return "inv:sport";
        case GenTag::Kind::inv_dst_port: return "inv:dport";
        case GenTag::Kind::inv_src_ip: return "inv:sip";
        case GenTag::Kind::inv_dst_ip: return "inv:dip";
        case GenTag::Kind::inv_protocol: os << "inv:proto=" << to_string(tag.new_proto); break;
        case GenTag::Kind::inv_direction: return "inv:dir";
        case GenTag::Kind::inv_content: os << "inv:content[" << tag.index << "]"; break;
        case GenTag::Kind::inv_region_before: os << "inv:before[" << tag.index << "]"; break;
        case GenTag::Kind::inv_region_after: os << "inv:after[" << tag.index << "]"; break;
        case GenTag::Kind::cor: os << "cor[" << tag.index << "," << tag.position << "]"; break;
        case GenTag::Kind::urr: os << "urr[" << tag.index << "," << tag.position << "]"; break;
        case GenTag::Kind::trim_head: os << "trim:head[" << tag.index << "]"; break;
        case GenTag::Kind::trim_tail: os << "trim:tail[" << tag.index << "]"; break;
    }
    return os.str();
}

namespace {

std::optional<int> parse_bracket_index(const std::string& code, std::size_t prefix_len) {
    if (code.size() < prefix_len + 3 || code[prefix_len] != '[' || code.back() != ']')
        return std::nullopt;
    int value = 0;
    auto first = code.data() + prefix_len + 1;
    auto last = code.data() + code.size() - 1;
    auto [p, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || p != last) return std::nullopt;
    return value;
}

std::optional<std::pair<int, int>> parse_bracket_pair(const std::string& code,
                                                      std::size_t prefix_len) {
    if (code.size() < prefix_len + 5 || code[prefix_len] != '[' || code.back() != ']')
        return std::nullopt;
    auto comma = code.find(',', prefix_len);
    if (comma == std::string::npos) return std::nullopt;
    int a = 0, b = 0;
    auto r1 = std::from_chars(code.data() + prefix_len + 1, code.data() + comma, a);
    auto r2 = std::from_chars(code.data() + comma + 1, code.data() + code.size() - 1, b);
    if (r1.ec != std::errc() || r1.ptr != code.data() + comma) return std::nullopt;
    if (r2.ec != std::errc() || r2.ptr != code.data() + code.size() - 1) return std::nullopt;
    return std::make_pair(a, b);
}

}  // namespace

std::optional<GenTag> tagcode_from_string(const std::string& code) {
    GenTag tag;
    if (code == "inv:sport") {
        tag.kind = GenTag::Kind::inv_src_port;
        return tag;
    }
    if (code == "inv:dport") {
        tag.kind = GenTag::Kind::inv_dst_port;
        return tag;
    }
    if (code == "inv:sip") {
        tag.kind = GenTag::Kind::inv_src_ip;
        return tag;
    }
    if (code == "inv:dip") {
        tag.kind = GenTag::Kind::inv_dst_ip;
        return tag;
    }
    if (code == "inv:dir") {
        tag.kind = GenTag::Kind::inv_direction;
        return tag;
    }
    if (code.starts_with("inv:proto=")) {
        auto proto = protocol_from_string(code.substr(10));
        if (!proto) return std::nullopt;
        tag.kind = GenTag::Kind::inv_protocol;
        tag.new_proto = *proto;
        return tag;
    }
    struct IndexedForm {
        std::string_view prefix;
        GenTag::Kind kind;
    };
    static constexpr std::array<IndexedForm, 5> indexed = {{
        {"inv:content", GenTag::Kind::inv_content},
        {"inv:before", GenTag::Kind::inv_region_before},
        {"inv:after", GenTag::Kind::inv_region_after},
        {"trim:head", GenTag::Kind::trim_head},
        {"trim:tail", GenTag::Kind::trim_tail},
    }};
    for (const auto& form : indexed) {
        if (code.starts_with(form.prefix)) {
            auto idx = parse_bracket_index(code, form.prefix.size());
            if (!idx) return std::nullopt;
            tag.kind = form.kind;
            tag.index = *idx;
            return tag;
        }
    }
    if (code.starts_with("cor") || code.starts_with("urr")) {
        auto pair = parse_bracket_pair(code, 3);
        if (!pair) return std::nullopt;
        tag.kind = code.starts_with("cor") ? GenTag::Kind::cor : GenTag::Kind::urr;
        tag.index = pair->first;
        tag.position = pair->second;
        return tag;
    }
    return std::nullopt;
}

std::string tag_msg(const std::string& msg, const GenTag& tag) {
    if (tag.is_original()) return msg;
    std::string out = msg;
    if (!out.empty()) out += ' ';
    out += kFuzzRuleIdMarker;
    out += ' ';
    out += tagcode(tag);
    return out;
}

SplitMsg split_tagged_msg(const std::string& msg) {
    SplitMsg result;
    const std::string marker = std::string(kFuzzRuleIdMarker) + " ";
    auto pos = msg.rfind(marker);
    if (pos == std::string::npos) {
        result.base = msg;
        result.tag = GenTag::original();
        return result;
    }
    std::size_t base_end = pos;
    while (base_end > 0 && msg[base_end - 1] == ' ') --base_end;
    result.base = msg.substr(0, base_end);
    result.code = msg.substr(pos + marker.size());
    result.tag = tagcode_from_string(result.code);
    return result;
}

const MsgOption* Rule::msg() const {
    for (const auto& opt : options)
        if (auto* m = std::get_if<MsgOption>(&opt)) return m;
    return nullptr;
}

std::optional<std::uint32_t> Rule::sid() const {
    for (const auto& opt : options)
        if (auto* s = std::get_if<SidOption>(&opt)) return s->value;
    return std::nullopt;
}

std::optional<std::uint32_t> Rule::rev() const {
    for (const auto& opt : options)
        if (auto* r = std::get_if<RevOption>(&opt)) return r->value;
    return std::nullopt;
}

std::optional<std::uint32_t> Rule::priority() const {
    for (const auto& opt : options)
        if (auto* p = std::get_if<PriorityOption>(&opt)) return p->value;
    return std::nullopt;
}

std::vector<std::size_t> Rule::content_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < options.size(); ++i)
        if (std::holds_alternative<ContentSpec>(options[i])) out.push_back(i);
    return out;
}

}  // namespace sigforge
