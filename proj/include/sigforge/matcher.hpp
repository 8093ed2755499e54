#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigforge/alert.hpp"
#include "sigforge/packet.hpp"
#include "sigforge/rule.hpp"
#include "sigforge/rule_parser.hpp"

namespace sigforge {

enum class MatchMode {
    first_match,  // one alert per packet, earliest rule in file order wins
    all_matches,  // diagnostic: every matching rule alerts
};

/// A rule with its variables resolved once, ready to probe many packets.
/// Construction throws VarError when the rule references an undefined
/// variable or one of the wrong kind.
class CompiledRule {
  public:
    CompiledRule(const Rule& rule, const VarTable& vars);

    bool matches(const Packet& packet) const;

    /// log/pass/dynamic rules are evaluated but never emit alerts.
    bool alertable() const { return alertable_; }
    Alert make_alert(const Packet& packet) const;

  private:
    struct AddrCheck {
        bool is_any = true;
        bool negated = false;
        std::vector<CidrBlock> blocks;

        bool matches(IPv4 ip) const;
    };
    struct PortCheck {
        PortSpec::Kind kind = PortSpec::Kind::any;
        bool negated = false;
        std::uint16_t lo = 0;
        std::uint16_t hi = 0;

        bool matches(std::uint16_t port, bool is_icmp) const;
    };

    bool matches_oriented(const Packet& packet, bool swapped) const;
    bool contents_match(const std::vector<std::uint8_t>& payload) const;

    Protocol protocol_;
    Direction direction_;
    AddrCheck src_addr_, dst_addr_;
    PortCheck src_port_, dst_port_;
    std::vector<ContentSpec> contents_;
    std::vector<DsizeOption> dsizes_;
    bool alertable_ = true;

    // alert template
    std::optional<std::uint32_t> sid_, rev_;
    std::uint32_t priority_ = 1;
    std::string msg_;
};

/// One-shot convenience wrapper around CompiledRule.
bool rule_matches(const Rule& rule, const Packet& packet, const VarTable& vars);

std::vector<Alert> run_detection(const std::vector<Rule>& rules,
                                 const std::vector<Packet>& packets, const VarTable& vars,
                                 MatchMode mode);

}  // namespace sigforge
