#include "sigforge/matcher.hpp"

namespace sigforge {

namespace {

std::uint8_t fold_case(std::uint8_t b) {
    return (b >= 'A' && b <= 'Z') ? static_cast<std::uint8_t>(b + 32) : b;
}

bool pattern_at(const ContentSpec& c, const std::vector<std::uint8_t>& payload, std::size_t s) {
    for (std::size_t i = 0; i < c.pattern.size(); ++i) {
        const PatternByte& pb = c.pattern[i];
        if (pb.is_wildcard()) continue;
        std::uint8_t want = *pb.byte;
        std::uint8_t got = payload[s + i];
        if (c.nocase) {
            want = fold_case(want);
            got = fold_case(got);
        }
        if (want != got) return false;
    }
    return true;
}

/// Leftmost payload position where the pattern may start, honoring
/// offset, depth, and distance-from-previous-match; nullopt when none.
std::optional<std::size_t> find_leftmost(const ContentSpec& c,
                                         const std::vector<std::uint8_t>& payload,
                                         std::size_t prev_end) {
    const std::size_t len = c.pattern.size();
    if (len > payload.size()) return std::nullopt;

    std::int64_t s_min = c.offset.value_or(0);
    if (c.distance) {
        std::int64_t from_prev = static_cast<std::int64_t>(prev_end) + *c.distance;
        if (from_prev > s_min) s_min = from_prev;
    }
    if (s_min < 0) s_min = 0;

    std::int64_t s_max = static_cast<std::int64_t>(payload.size() - len);
    if (c.depth) {
        // valid starts satisfy s + len <= offset + depth
        std::int64_t region_max = static_cast<std::int64_t>(c.offset.value_or(0)) + *c.depth -
                                  static_cast<std::int64_t>(len);
        if (region_max < s_max) s_max = region_max;
    }
    for (std::int64_t s = s_min; s <= s_max; ++s) {
        if (pattern_at(c, payload, static_cast<std::size_t>(s))) {
            return static_cast<std::size_t>(s);
        }
    }
    return std::nullopt;
}

bool dsize_holds(const DsizeOption& d, std::size_t payload_len) {
    switch (d.cmp) {
        case DsizeOption::Cmp::eq: return payload_len == d.bytes;
        case DsizeOption::Cmp::gt: return payload_len > d.bytes;
        case DsizeOption::Cmp::lt: return payload_len < d.bytes;
    }
    return false;
}

}  // namespace

bool CompiledRule::AddrCheck::matches(IPv4 ip) const {
    bool base = is_any;
    if (!base) {
        for (const auto& block : blocks) {
            if (block.contains(ip)) {
                base = true;
                break;
            }
        }
    }
    return base != negated;
}

bool CompiledRule::PortCheck::matches(std::uint16_t port, bool is_icmp) const {
    if (kind == PortSpec::Kind::any) return !negated;
    if (is_icmp) return false;  // icmp has no ports; only `any` holds
    bool base = false;
    switch (kind) {
        case PortSpec::Kind::any: base = true; break;
        case PortSpec::Kind::single: base = port == lo; break;
        case PortSpec::Kind::range: base = port >= lo && port <= hi; break;
        case PortSpec::Kind::from: base = port >= lo; break;
        case PortSpec::Kind::to: base = port <= hi; break;
        case PortSpec::Kind::variable: break;  // resolved away in constructor
    }
    return base != negated;
}

CompiledRule::CompiledRule(const Rule& rule, const VarTable& vars)
    : protocol_(rule.protocol), direction_(rule.direction) {
    auto compile_addr = [&vars](const AddrSpec& spec) {
        AddrCheck check;
        const AddrSpec* resolved = &spec;
        check.negated = spec.negated;
        if (spec.kind == AddrSpec::Kind::variable) {
            resolved = &vars.resolve_addr(spec.var_name);
            // !$VAR over a negated definition double-negates
            check.negated = spec.negated != resolved->negated;
        }
        check.is_any = resolved->kind == AddrSpec::Kind::any;
        check.blocks = resolved->blocks;
        return check;
    };
    auto compile_port = [&vars](const PortSpec& spec) {
        PortCheck check;
        const PortSpec* resolved = &spec;
        check.negated = spec.negated;
        if (spec.kind == PortSpec::Kind::variable) {
            resolved = &vars.resolve_port(spec.var_name);
            check.negated = spec.negated != resolved->negated;
        }
        check.kind = resolved->kind;
        check.lo = resolved->lo;
        check.hi = resolved->hi;
        return check;
    };
    src_addr_ = compile_addr(rule.src_addr);
    dst_addr_ = compile_addr(rule.dst_addr);
    src_port_ = compile_port(rule.src_port);
    dst_port_ = compile_port(rule.dst_port);

    for (const auto& option : rule.options) {
        if (const auto* content = std::get_if<ContentSpec>(&option)) {
            contents_.push_back(*content);
        } else if (const auto* dsize = std::get_if<DsizeOption>(&option)) {
            dsizes_.push_back(*dsize);
        }
    }

    alertable_ = rule.action == Action::alert || rule.action == Action::activate;
    sid_ = rule.sid();
    rev_ = rule.rev();
    priority_ = rule.priority().value_or(1);
    if (const auto* msg = rule.msg()) msg_ = msg->text;
}

bool CompiledRule::matches_oriented(const Packet& packet, bool swapped) const {
    const bool is_icmp = packet.protocol == Protocol::icmp;
    IPv4 src_ip = swapped ? packet.dst_ip : packet.src_ip;
    IPv4 dst_ip = swapped ? packet.src_ip : packet.dst_ip;
    std::uint16_t src_port = swapped ? packet.dst_port : packet.src_port;
    std::uint16_t dst_port = swapped ? packet.src_port : packet.dst_port;
    return src_addr_.matches(src_ip) && dst_addr_.matches(dst_ip) &&
           src_port_.matches(src_port, is_icmp) && dst_port_.matches(dst_port, is_icmp);
}

bool CompiledRule::contents_match(const std::vector<std::uint8_t>& payload) const {
    std::size_t prev_end = 0;
    for (const auto& content : contents_) {
        auto pos = find_leftmost(content, payload, prev_end);
        if (content.negated) {
            if (pos) return false;
            // a negated content never advances the distance anchor
        } else {
            if (!pos) return false;
            prev_end = *pos + content.pattern.size();
        }
    }
    return true;
}

bool CompiledRule::matches(const Packet& packet) const {
    if (protocol_ != Protocol::ip && protocol_ != packet.protocol) return false;
    bool header_ok = matches_oriented(packet, false);
    if (!header_ok && direction_ == Direction::bidirectional) {
        header_ok = matches_oriented(packet, true);
    }
    if (!header_ok) return false;
    for (const auto& dsize : dsizes_) {
        if (!dsize_holds(dsize, packet.payload.size())) return false;
    }
    return contents_match(packet.payload);
}

Alert CompiledRule::make_alert(const Packet& packet) const {
    Alert alert;
    alert.ts = packet.ts;
    alert.sid = sid_;
    alert.rev = rev_;
    alert.msg = msg_;
    alert.priority = priority_;
    alert.protocol = packet.protocol;
    alert.src_ip = packet.src_ip;
    alert.src_port = packet.src_port;
    alert.dst_ip = packet.dst_ip;
    alert.dst_port = packet.dst_port;
    return alert;
}

bool rule_matches(const Rule& rule, const Packet& packet, const VarTable& vars) {
    return CompiledRule(rule, vars).matches(packet);
}

std::vector<Alert> run_detection(const std::vector<Rule>& rules,
                                 const std::vector<Packet>& packets, const VarTable& vars,
                                 MatchMode mode) {
    std::vector<CompiledRule> compiled;
    compiled.reserve(rules.size());
    for (const auto& rule : rules) compiled.emplace_back(rule, vars);

    std::vector<Alert> alerts;
    for (const auto& packet : packets) {
        for (const auto& rule : compiled) {
            if (!rule.alertable()) continue;
            if (!rule.matches(packet)) continue;
            alerts.push_back(rule.make_alert(packet));
            if (mode == MatchMode::first_match) break;
        }
    }
    return alerts;
}

}  // namespace sigforge
