#include "sigforge/rule_parser.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace sigforge {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

std::optional<std::uint32_t> parse_u32(std::string_view s) {
    std::uint32_t value = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
    return value;
}

std::optional<std::int32_t> parse_i32(std::string_view s) {
    std::int32_t value = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
    return value;
}

std::optional<std::uint16_t> parse_port_number(std::string_view s) {
    auto v = parse_u32(s);
    if (!v || *v > 65535) return std::nullopt;
    return static_cast<std::uint16_t>(*v);
}

std::optional<CidrBlock> parse_cidr_block(std::string_view text) {
    CidrBlock block;
    auto slash = text.find('/');
    std::string addr_part(slash == std::string_view::npos ? text : text.substr(0, slash));
    auto ip = parse_ipv4(addr_part);
    if (!ip) return std::nullopt;
    block.base = *ip;
    if (slash != std::string_view::npos) {
        auto prefix = parse_u32(text.substr(slash + 1));
        if (!prefix || *prefix > 32) return std::nullopt;
        block.prefix = static_cast<int>(*prefix);
    }
    return block;
}

std::optional<AddrSpec> parse_addr_spec(std::string_view token) {
    bool negated = false;
    if (!token.empty() && token.front() == '!') {
        negated = true;
        token.remove_prefix(1);
    }
    if (token.empty()) return std::nullopt;
    if (token == "any") {
        if (negated) return std::nullopt;  // !any matches nothing
        return AddrSpec::make_any();
    }
    if (token.front() == '$') {
        if (token.size() < 2) return std::nullopt;
        return AddrSpec::make_var(std::string(token.substr(1)), negated);
    }
    std::vector<CidrBlock> blocks;
    if (token.front() == '[') {
        if (token.back() != ']') return std::nullopt;
        std::string_view inner = token.substr(1, token.size() - 2);
        while (!inner.empty()) {
            auto comma = inner.find(',');
            std::string_view item =
                comma == std::string_view::npos ? inner : inner.substr(0, comma);
            auto block = parse_cidr_block(trim(item));
            if (!block) return std::nullopt;
            blocks.push_back(*block);
            if (comma == std::string_view::npos) break;
            inner.remove_prefix(comma + 1);
            if (inner.empty()) return std::nullopt;  // dangling comma
        }
        if (blocks.empty()) return std::nullopt;
    } else {
        auto block = parse_cidr_block(token);
        if (!block) return std::nullopt;
        blocks.push_back(*block);
    }
    return AddrSpec::make_cidr(std::move(blocks), negated);
}

std::optional<PortSpec> parse_port_spec(std::string_view token) {
    bool negated = false;
    if (!token.empty() && token.front() == '!') {
        negated = true;
        token.remove_prefix(1);
    }
    if (token.empty()) return std::nullopt;
    if (token == "any") {
        if (negated) return std::nullopt;
        return PortSpec::make_any();
    }
    if (token.front() == '$') {
        if (token.size() < 2) return std::nullopt;
        return PortSpec::make_var(std::string(token.substr(1)), negated);
    }
    auto colon = token.find(':');
    if (colon == std::string_view::npos) {
        auto port = parse_port_number(token);
        if (!port) return std::nullopt;
        return PortSpec::make_single(*port, negated);
    }
    std::string_view lo_part = token.substr(0, colon);
    std::string_view hi_part = token.substr(colon + 1);
    if (lo_part.empty() && hi_part.empty()) return std::nullopt;
    if (lo_part.empty()) {
        auto hi = parse_port_number(hi_part);
        if (!hi) return std::nullopt;
        return PortSpec::make_to(*hi, negated);
    }
    if (hi_part.empty()) {
        auto lo = parse_port_number(lo_part);
        if (!lo) return std::nullopt;
        return PortSpec::make_from(*lo, negated);
    }
    auto lo = parse_port_number(lo_part);
    auto hi = parse_port_number(hi_part);
    if (!lo || !hi || *lo > *hi) return std::nullopt;
    return PortSpec::make_range(*lo, *hi, negated);
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

/// Parses content-pattern text: bare printable characters, backslash
/// escapes, |hh hh| hex runs, and |?| wildcards (standalone or embedded
/// in a hex run).
std::optional<Pattern> parse_pattern(std::string_view text, std::string& error) {
    Pattern pattern;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (c == '\\') {
            if (i + 1 >= n) {
                error = "dangling escape in content";
                return std::nullopt;
            }
            pattern.push_back(pattern_lit(static_cast<std::uint8_t>(text[i + 1])));
            i += 2;
        } else if (c == '|') {
            if (text.substr(i, 3) == "|?|") {
                pattern.push_back(pattern_wildcard());
                i += 3;
                continue;
            }
            // hex run
            ++i;
            bool closed = false;
            while (i < n) {
                if (text[i] == ' ') {
                    ++i;
                    continue;
                }
                if (text[i] == '|') {
                    if (text.substr(i, 3) == "|?|") {
                        pattern.push_back(pattern_wildcard());
                        i += 3;
                        continue;
                    }
                    ++i;
                    closed = true;
                    break;
                }
                if (i + 1 >= n || hex_value(text[i]) < 0 || hex_value(text[i + 1]) < 0) {
                    error = "bad hex digits in content";
                    return std::nullopt;
                }
                pattern.push_back(pattern_hex(
                    static_cast<std::uint8_t>(hex_value(text[i]) * 16 + hex_value(text[i + 1]))));
                i += 2;
            }
            if (!closed) {
                error = "unterminated hex run in content";
                return std::nullopt;
            }
        } else {
            pattern.push_back(pattern_lit(static_cast<std::uint8_t>(c)));
            ++i;
        }
    }
    if (pattern.empty()) {
        error = "empty content pattern";
        return std::nullopt;
    }
    return pattern;
}

std::string unescape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            out += s[i + 1];
            ++i;
        } else {
            out += s[i];
        }
    }
    return out;
}

std::string escape_msg(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\' || c == ';') out += '\\';
        out += c;
    }
    return out;
}

/// Splits an options body on semicolons, honoring quotes and escapes.
std::vector<std::string> split_options(std::string_view body) {
    std::vector<std::string> pieces;
    std::string current;
    bool in_quotes = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '\\' && i + 1 < body.size()) {
            current += c;
            current += body[i + 1];
            ++i;
            continue;
        }
        if (c == '"') in_quotes = !in_quotes;
        if (c == ';' && !in_quotes) {
            pieces.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    pieces.push_back(current);
    return pieces;
}

/// A string option value: quoted values are unescaped, bare values
/// trimmed and kept raw.
std::optional<std::string> parse_string_value(std::string_view raw, std::string& error) {
    raw = trim(raw);
    if (!raw.empty() && raw.front() == '"') {
        // locate the unescaped closing quote
        for (std::size_t i = 1; i < raw.size(); ++i) {
            if (raw[i] == '\\') {
                ++i;
                continue;
            }
            if (raw[i] == '"') {
                if (!trim(raw.substr(i + 1)).empty()) {
                    error = "trailing text after closing quote";
                    return std::nullopt;
                }
                return unescape(raw.substr(1, i - 1));
            }
        }
        error = "unterminated quoted value";
        return std::nullopt;
    }
    return std::string(raw);
}

struct OptionsParseState {
    std::vector<RuleOption> options;
    int last_content = -1;  // index into options
};

bool attach_to_content(OptionsParseState& state, const char* what, std::string& error,
                       ContentSpec*& content) {
    if (state.last_content < 0) {
        error = std::string(what) + " with no preceding content";
        return false;
    }
    content = &std::get<ContentSpec>(state.options[state.last_content]);
    return true;
}

bool parse_one_option(std::string_view piece, OptionsParseState& state, std::string& error) {
    piece = trim(piece);
    auto colon = piece.find(':');
    std::string name(trim(piece.substr(0, colon)));
    bool has_value = colon != std::string_view::npos;
    std::string_view raw_value = has_value ? piece.substr(colon + 1) : std::string_view();

    if (name.empty()) {
        error = "empty option name";
        return false;
    }

    if (name == "msg") {
        auto text = parse_string_value(raw_value, error);
        if (!text) return false;
        state.options.emplace_back(MsgOption{*text});
        return true;
    }
    if (name == "content" || name == "uricontent") {
        std::string_view value = trim(raw_value);
        ContentSpec spec;
        spec.kind = name == "content" ? ContentSpec::Kind::content : ContentSpec::Kind::uricontent;
        if (!value.empty() && value.front() == '!') {
            spec.negated = true;
            value = trim(value.substr(1));
        }
        std::string_view body = value;
        if (!value.empty() && value.front() == '"') {
            if (value.size() < 2 || value.back() != '"') {
                error = "unterminated quoted content";
                return false;
            }
            body = value.substr(1, value.size() - 2);
        }
        auto pattern = parse_pattern(body, error);
        if (!pattern) return false;
        spec.pattern = std::move(*pattern);
        state.last_content = static_cast<int>(state.options.size());
        state.options.emplace_back(std::move(spec));
        return true;
    }
    if (name == "offset" || name == "depth" || name == "distance") {
        ContentSpec* content = nullptr;
        if (!attach_to_content(state, name.c_str(), error, content)) return false;
        if (name == "distance") {
            auto v = parse_i32(trim(raw_value));
            if (!v) {
                error = "bad distance value";
                return false;
            }
            if (content->distance) {
                error = "duplicate distance";
                return false;
            }
            content->distance = *v;
            return true;
        }
        auto v = parse_u32(trim(raw_value));
        if (!v) {
            error = "bad " + name + " value";
            return false;
        }
        if (name == "offset") {
            if (content->offset) {
                error = "duplicate offset";
                return false;
            }
            content->offset = *v;
        } else {
            if (*v == 0) {
                error = "depth must be positive";
                return false;
            }
            if (content->depth) {
                error = "duplicate depth";
                return false;
            }
            content->depth = *v;
        }
        return true;
    }
    if (name == "nocase") {
        ContentSpec* content = nullptr;
        if (!attach_to_content(state, "nocase", error, content)) return false;
        content->nocase = true;
        return true;
    }
    if (name == "sid" || name == "rev" || name == "priority") {
        auto v = parse_u32(trim(raw_value));
        if (!v) {
            error = "bad " + name + " value";
            return false;
        }
        if (name == "sid") {
            state.options.emplace_back(SidOption{*v});
        } else if (name == "rev") {
            state.options.emplace_back(RevOption{*v});
        } else {
            if (*v < 1) {
                error = "priority must be >= 1";
                return false;
            }
            state.options.emplace_back(PriorityOption{*v});
        }
        return true;
    }
    if (name == "dsize") {
        std::string_view value = trim(raw_value);
        DsizeOption dsize;
        if (!value.empty() && value.front() == '>') {
            dsize.cmp = DsizeOption::Cmp::gt;
            value.remove_prefix(1);
        } else if (!value.empty() && value.front() == '<') {
            dsize.cmp = DsizeOption::Cmp::lt;
            value.remove_prefix(1);
        }
        auto v = parse_u32(trim(value));
        if (!v) {
            error = "bad dsize value";
            return false;
        }
        dsize.bytes = *v;
        state.options.emplace_back(dsize);
        return true;
    }
    if (name == "classtype") {
        auto v = parse_string_value(raw_value, error);
        if (!v) return false;
        state.options.emplace_back(ClasstypeOption{*v});
        return true;
    }
    if (name == "flow") {
        auto v = parse_string_value(raw_value, error);
        if (!v) return false;
        state.options.emplace_back(FlowOption{*v});
        return true;
    }
    if (name == "reference") {
        auto v = parse_string_value(raw_value, error);
        if (!v) return false;
        state.options.emplace_back(ReferenceOption{*v});
        return true;
    }
    if (name == "regex") {
        state.options.emplace_back(RegexOption{});
        return true;
    }
    // unknown option: preserved opaquely, value text untouched
    OpaqueOption opaque;
    opaque.name = name;
    if (has_value) opaque.value = std::string(raw_value);
    state.options.emplace_back(std::move(opaque));
    return true;
}

}  // namespace

std::optional<Rule> parse_rule_line(const std::string& line, std::string& error) {
    std::string_view text = trim(line);
    std::string_view header_part = text;
    std::string_view body_part;
    bool has_body = false;

    auto open = text.find('(');
    if (open != std::string_view::npos) {
        auto close = text.rfind(')');
        if (close == std::string_view::npos || close < open) {
            error = "unbalanced parentheses";
            return std::nullopt;
        }
        if (!trim(text.substr(close + 1)).empty()) {
            error = "trailing text after rule body";
            return std::nullopt;
        }
        header_part = text.substr(0, open);
        body_part = text.substr(open + 1, close - open - 1);
        has_body = true;
    }

    auto tokens = split_ws(header_part);
    if (tokens.size() != 7) {
        error = "expected 7 header fields, got " + std::to_string(tokens.size());
        return std::nullopt;
    }

    Rule rule;
    auto action = action_from_string(tokens[0]);
    if (!action) {
        error = "unknown action '" + tokens[0] + "'";
        return std::nullopt;
    }
    rule.action = *action;
    auto proto = protocol_from_string(tokens[1]);
    if (!proto) {
        error = "unknown protocol '" + tokens[1] + "'";
        return std::nullopt;
    }
    rule.protocol = *proto;
    auto src_addr = parse_addr_spec(tokens[2]);
    if (!src_addr) {
        error = "bad source address '" + tokens[2] + "'";
        return std::nullopt;
    }
    rule.src_addr = std::move(*src_addr);
    auto src_port = parse_port_spec(tokens[3]);
    if (!src_port) {
        error = "bad source port '" + tokens[3] + "'";
        return std::nullopt;
    }
    rule.src_port = *src_port;
    if (tokens[4] == "->") {
        rule.direction = Direction::to_dest;
    } else if (tokens[4] == "<>") {
        rule.direction = Direction::bidirectional;
    } else {
        error = "bad direction '" + tokens[4] + "'";
        return std::nullopt;
    }
    auto dst_addr = parse_addr_spec(tokens[5]);
    if (!dst_addr) {
        error = "bad destination address '" + tokens[5] + "'";
        return std::nullopt;
    }
    rule.dst_addr = std::move(*dst_addr);
    auto dst_port = parse_port_spec(tokens[6]);
    if (!dst_port) {
        error = "bad destination port '" + tokens[6] + "'";
        return std::nullopt;
    }
    rule.dst_port = *dst_port;

    if (has_body) {
        OptionsParseState state;
        for (const auto& piece : split_options(body_part)) {
            if (trim(piece).empty()) continue;
            if (!parse_one_option(piece, state, error)) return std::nullopt;
        }
        rule.options = std::move(state.options);
    }

    // a generated variant carries its tag in the msg; recover it
    if (const auto* msg = rule.msg()) {
        auto split = split_tagged_msg(msg->text);
        if (split.tag) rule.origin = *split.tag;
    }
    return rule;
}

ParsedRules parse_rules_file(const std::string& text) {
    ParsedRules result;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        std::string error;
        auto rule = parse_rule_line(line, error);
        if (rule) {
            result.rules.push_back(std::move(*rule));
        } else {
            result.diagnostics.push_back({lineno, error});
        }
    }
    return result;
}

namespace {

std::string render_cidr(const CidrBlock& block) {
    std::string out = to_string(block.base);
    if (block.prefix != 32) out += "/" + std::to_string(block.prefix);
    return out;
}

std::string render_addr_spec(const AddrSpec& spec) {
    std::string out;
    if (spec.negated) out += '!';
    switch (spec.kind) {
        case AddrSpec::Kind::any: return "any";
        case AddrSpec::Kind::variable: out += "$" + spec.var_name; break;
        case AddrSpec::Kind::cidr:
            if (spec.blocks.size() == 1) {
                out += render_cidr(spec.blocks[0]);
            } else {
                out += '[';
                for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
                    if (i) out += ',';
                    out += render_cidr(spec.blocks[i]);
                }
                out += ']';
            }
            break;
    }
    return out;
}

std::string render_port_spec(const PortSpec& spec) {
    std::string out;
    if (spec.negated) out += '!';
    switch (spec.kind) {
        case PortSpec::Kind::any: return "any";
        case PortSpec::Kind::variable: out += "$" + spec.var_name; break;
        case PortSpec::Kind::single: out += std::to_string(spec.lo); break;
        case PortSpec::Kind::range:
            out += std::to_string(spec.lo) + ":" + std::to_string(spec.hi);
            break;
        case PortSpec::Kind::from: out += std::to_string(spec.lo) + ":"; break;
        case PortSpec::Kind::to: out += ":" + std::to_string(spec.hi); break;
    }
    return out;
}

void render_option(const RuleOption& option, std::vector<std::string>& pieces) {
    struct Renderer {
        std::vector<std::string>& pieces;

        void operator()(const ContentSpec& c) {
            std::string out = c.kind == ContentSpec::Kind::content ? "content:" : "uricontent:";
            if (c.negated) out += '!';
            out += '"' + render_pattern(c.pattern) + '"';
            pieces.push_back(std::move(out));
            if (c.offset) pieces.push_back("offset:" + std::to_string(*c.offset));
            if (c.depth) pieces.push_back("depth:" + std::to_string(*c.depth));
            if (c.distance) pieces.push_back("distance:" + std::to_string(*c.distance));
            if (c.nocase) pieces.push_back("nocase");
        }
        void operator()(const MsgOption& m) { pieces.push_back("msg:\"" + escape_msg(m.text) + "\""); }
        void operator()(const SidOption& s) { pieces.push_back("sid:" + std::to_string(s.value)); }
        void operator()(const RevOption& r) { pieces.push_back("rev:" + std::to_string(r.value)); }
        void operator()(const PriorityOption& p) {
            pieces.push_back("priority:" + std::to_string(p.value));
        }
        void operator()(const DsizeOption& d) {
            std::string out = "dsize:";
            if (d.cmp == DsizeOption::Cmp::gt) out += '>';
            if (d.cmp == DsizeOption::Cmp::lt) out += '<';
            out += std::to_string(d.bytes);
            pieces.push_back(std::move(out));
        }
        void operator()(const ClasstypeOption& c) { pieces.push_back("classtype:" + c.name); }
        void operator()(const FlowOption& f) { pieces.push_back("flow:" + f.spec); }
        void operator()(const ReferenceOption& r) { pieces.push_back("reference:" + r.value); }
        void operator()(const RegexOption&) { pieces.push_back("regex"); }
        void operator()(const OpaqueOption& o) {
            pieces.push_back(o.value ? o.name + ":" + *o.value : o.name);
        }
    };
    std::visit(Renderer{pieces}, option);
}

}  // namespace

std::string serialize_rule(const Rule& rule) {
    std::string out = to_string(rule.action);
    out += ' ';
    out += to_string(rule.protocol);
    out += ' ';
    out += render_addr_spec(rule.src_addr);
    out += ' ';
    out += render_port_spec(rule.src_port);
    out += ' ';
    out += to_string(rule.direction);
    out += ' ';
    out += render_addr_spec(rule.dst_addr);
    out += ' ';
    out += render_port_spec(rule.dst_port);
    if (rule.options.empty()) return out;

    std::vector<std::string> pieces;
    for (const auto& option : rule.options) render_option(option, pieces);
    out += " (";
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (i) out += ' ';
        out += pieces[i];
        out += ';';
    }
    out += ')';
    return out;
}

void VarTable::define(const std::string& name, VarValue value) {
    if (vars_.contains(name)) throw std::runtime_error("duplicate variable definition: " + name);
    vars_.emplace(name, std::move(value));
}

const AddrSpec& VarTable::resolve_addr(const std::string& name) const {
    auto it = vars_.find(name);
    if (it == vars_.end() || !it->second.addr) throw VarError(name);
    return *it->second.addr;
}

const PortSpec& VarTable::resolve_port(const std::string& name) const {
    auto it = vars_.find(name);
    if (it == vars_.end() || !it->second.port) throw VarError(name);
    return *it->second.port;
}

VarTable parse_var_config(const std::string& text) {
    VarTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        auto tokens = split_ws(stripped);
        if (tokens.size() != 3 || tokens[0] != "var") {
            throw std::runtime_error("var config line " + std::to_string(lineno) +
                                     ": expected 'var NAME VALUE'");
        }
        const std::string& name = tokens[1];
        const std::string& value = tokens[2];
        VarValue var;
        auto addr = parse_addr_spec(value);
        if (addr && addr->kind != AddrSpec::Kind::variable) var.addr = std::move(addr);
        auto port = parse_port_spec(value);
        if (port && port->kind != PortSpec::Kind::variable) var.port = std::move(port);
        if (!var.addr && !var.port) {
            throw std::runtime_error("var config line " + std::to_string(lineno) +
                                     ": cannot parse value '" + value + "'");
        }
        table.define(name, std::move(var));
    }
    return table;
}

}  // namespace sigforge
