#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sigforge {

enum class Action { alert, log, pass, activate, dynamic };
enum class Protocol { tcp, udp, icmp, ip };
enum class Direction { to_dest, bidirectional };

std::string to_string(Action a);
std::string to_string(Protocol p);
std::string to_string(Direction d);
std::optional<Action> action_from_string(const std::string& s);
std::optional<Protocol> protocol_from_string(const std::string& s);

/// IPv4 address held in host byte order.
struct IPv4 {
    std::uint32_t bits = 0;

    auto operator<=>(const IPv4&) const = default;
};

std::optional<IPv4> parse_ipv4(const std::string& text);
std::string to_string(IPv4 ip);

struct CidrBlock {
    IPv4 base;
    int prefix = 32;  // 0..32

    bool contains(IPv4 ip) const;
    bool operator==(const CidrBlock&) const = default;
};

/// Address condition of a rule header. `any` never carries negation.
struct AddrSpec {
    enum class Kind { any, variable, cidr };

    Kind kind = Kind::any;
    bool negated = false;
    std::string var_name;           // kind == variable
    std::vector<CidrBlock> blocks;  // kind == cidr

    static AddrSpec make_any() { return {}; }
    static AddrSpec make_var(std::string name, bool neg = false);
    static AddrSpec make_cidr(std::vector<CidrBlock> blocks, bool neg = false);

    bool is_any() const { return kind == Kind::any; }
    bool operator==(const AddrSpec&) const = default;
};

/// Port condition of a rule header. `from` is an open range `lo:`,
/// `to` is `:hi`. `any` never carries negation.
struct PortSpec {
    enum class Kind { any, variable, single, range, from, to };

    Kind kind = Kind::any;
    bool negated = false;
    std::string var_name;
    std::uint16_t lo = 0;
    std::uint16_t hi = 0;

    static PortSpec make_any() { return {}; }
    static PortSpec make_var(std::string name, bool neg = false);
    static PortSpec make_single(std::uint16_t port, bool neg = false);
    static PortSpec make_range(std::uint16_t lo, std::uint16_t hi, bool neg = false);
    static PortSpec make_from(std::uint16_t lo, bool neg = false);
    static PortSpec make_to(std::uint16_t hi, bool neg = false);

    bool is_any() const { return kind == Kind::any; }
    /// Membership before negation is applied; not valid for variables.
    bool base_contains(std::uint16_t port) const;
    bool operator==(const PortSpec&) const = default;
};

/// One byte of a content pattern. A disengaged byte is the |?| wildcard
/// and matches anything. The hex flag records whether a literal was
/// spelled inside a |..| run so serialization reproduces the original
/// notation; matching ignores it.
struct PatternByte {
    std::optional<std::uint8_t> byte;
    bool hex = false;

    bool is_wildcard() const { return !byte.has_value(); }
    bool operator==(const PatternByte&) const = default;
};

inline constexpr bool renders_bare(std::uint8_t b) { return b >= 0x20 && b < 0x7f; }

inline PatternByte pattern_lit(std::uint8_t b) { return {b, !renders_bare(b)}; }
inline PatternByte pattern_hex(std::uint8_t b) { return {b, true}; }
inline PatternByte pattern_wildcard() { return {std::nullopt, false}; }

using Pattern = std::vector<PatternByte>;

/// Builds a pattern of literal bytes from ASCII text.
Pattern pattern_from_text(std::string_view text);

/// Renders a pattern in rule-content syntax: bare-spelled printables as
/// characters, hex-spelled and non-printable bytes in |hh hh| runs,
/// wildcards as |?|. A wildcard adjacent to a hex run joins that run,
/// as in "|00 00 |?||"; elsewhere it stands alone, as in "HTTP/1.|?| 403".
std::string render_pattern(const Pattern& pattern);

/// One content or uricontent condition with its positional modifiers.
struct ContentSpec {
    enum class Kind { content, uricontent };

    Kind kind = Kind::content;
    Pattern pattern;
    bool negated = false;
    bool nocase = false;
    std::optional<std::uint32_t> offset;
    std::optional<std::uint32_t> depth;
    std::optional<std::int32_t> distance;

    bool operator==(const ContentSpec&) const = default;
};

struct MsgOption {
    std::string text;
    bool operator==(const MsgOption&) const = default;
};
struct SidOption {
    std::uint32_t value = 0;
    bool operator==(const SidOption&) const = default;
};
struct RevOption {
    std::uint32_t value = 0;
    bool operator==(const RevOption&) const = default;
};
struct PriorityOption {
    std::uint32_t value = 1;  // >= 1, 1 is most severe
    bool operator==(const PriorityOption&) const = default;
};
struct DsizeOption {
    enum class Cmp { eq, gt, lt };
    Cmp cmp = Cmp::eq;
    std::uint32_t bytes = 0;
    bool operator==(const DsizeOption&) const = default;
};
struct ClasstypeOption {
    std::string name;
    bool operator==(const ClasstypeOption&) const = default;
};
struct FlowOption {
    std::string spec;
    bool operator==(const FlowOption&) const = default;
};
struct ReferenceOption {
    std::string value;
    bool operator==(const ReferenceOption&) const = default;
};
struct RegexOption {
    bool operator==(const RegexOption&) const = default;
};
/// Unrecognized option, preserved byte-identically.
struct OpaqueOption {
    std::string name;
    std::optional<std::string> value;
    bool operator==(const OpaqueOption&) const = default;
};

using RuleOption = std::variant<ContentSpec, MsgOption, SidOption, RevOption, PriorityOption,
                                DsizeOption, ClasstypeOption, FlowOption, ReferenceOption,
                                RegexOption, OpaqueOption>;

/// Provenance of a rule: the original signature or one generated variant.
struct GenTag {
    enum class Kind {
        original,
        inv_src_port,
        inv_dst_port,
        inv_src_ip,
        inv_dst_ip,
        inv_protocol,
        inv_direction,
        inv_content,
        inv_region_before,
        inv_region_after,
        cor,
        urr,
        trim_head,
        trim_tail,
    };

    Kind kind = Kind::original;
    Protocol new_proto = Protocol::tcp;  // inv_protocol
    int index = -1;                      // which content option was modified
    int position = -1;                   // which pattern byte was replaced

    static GenTag original() { return {}; }
    bool is_original() const { return kind == Kind::original; }
    bool operator==(const GenTag&) const = default;
};

/// Renders a non-original tag to its code, e.g. "cor[0,2]" or "inv:proto=udp".
std::string tagcode(const GenTag& tag);

/// Parses a tag code back; nullopt for unknown codes.
std::optional<GenTag> tagcode_from_string(const std::string& code);

/// Marker separating a rule message from its variant tag code.
inline constexpr const char* kFuzzRuleIdMarker = "FuzzRuleId";

/// Appends " FuzzRuleId <code>" to a message.
std::string tag_msg(const std::string& msg, const GenTag& tag);

/// Splits a message into (base text, tag). Untagged messages map to the
/// original tag. The tag of an unknown code after the marker is nullopt.
struct SplitMsg {
    std::string base;
    std::string code;  // empty when untagged
    std::optional<GenTag> tag;
};
SplitMsg split_tagged_msg(const std::string& msg);

struct Rule {
    Action action = Action::alert;
    Protocol protocol = Protocol::tcp;
    AddrSpec src_addr;
    PortSpec src_port;
    Direction direction = Direction::to_dest;
    AddrSpec dst_addr;
    PortSpec dst_port;
    std::vector<RuleOption> options;
    GenTag origin;

    const MsgOption* msg() const;
    std::optional<std::uint32_t> sid() const;
    std::optional<std::uint32_t> rev() const;
    std::optional<std::uint32_t> priority() const;
    /// Indices into `options` of every content/uricontent option, in order.
    std::vector<std::size_t> content_indices() const;

    bool operator==(const Rule&) const = default;
};

}  // namespace sigforge
