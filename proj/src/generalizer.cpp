#include "sigforge/generalizer.hpp"

#include <utility>

namespace sigforge {

namespace {

/// Stamps a freshly copied rule as a variant: records the tag, appends
/// it to the msg, and demotes the priority.
void mark_variant(Rule& rule, const GenTag& tag, const GenConfig& cfg) {
    std::uint32_t demoted = rule.priority().value_or(1) + cfg.priority_offset;

    rule.origin = tag;
    bool msg_done = false;
    bool priority_done = false;
    for (auto& option : rule.options) {
        if (auto* msg = std::get_if<MsgOption>(&option); msg && !msg_done) {
            msg->text = tag_msg(msg->text, tag);
            msg_done = true;
        } else if (auto* priority = std::get_if<PriorityOption>(&option);
                   priority && !priority_done) {
            priority->value = demoted;
            priority_done = true;
        }
    }
    if (!msg_done) rule.options.insert(rule.options.begin(), MsgOption{tag_msg("", tag)});
    if (!priority_done) rule.options.emplace_back(PriorityOption{demoted});
}

void set_sid(Rule& rule, std::uint32_t sid) {
    for (auto& option : rule.options) {
        if (auto* existing = std::get_if<SidOption>(&option)) {
            existing->value = sid;
            return;
        }
    }
    rule.options.emplace_back(SidOption{sid});
}

std::optional<ContentSpec> region_before(const ContentSpec& content) {
    std::int64_t o = content.offset.value_or(0);
    std::int64_t len = static_cast<std::int64_t>(content.pattern.size());
    if (o <= 0) return std::nullopt;  // nothing before the region
    std::int64_t new_depth = o + len - 1;
    if (new_depth <= 0) return std::nullopt;
    ContentSpec out = content;
    out.offset = 0;
    out.depth = static_cast<std::uint32_t>(new_depth);
    return out;
}

std::optional<ContentSpec> region_after(const ContentSpec& content) {
    if (!content.depth) return std::nullopt;  // original region is unbounded
    std::int64_t o = content.offset.value_or(0);
    std::int64_t len = static_cast<std::int64_t>(content.pattern.size());
    std::int64_t new_offset = o + *content.depth - (len - 1);
    if (new_offset < 0) return std::nullopt;
    ContentSpec out = content;
    out.offset = static_cast<std::uint32_t>(new_offset);
    out.depth = std::nullopt;
    return out;
}

}  // namespace

std::vector<ContentSpec> invert_region(const ContentSpec& content) {
    std::vector<ContentSpec> out;
    if (!content.offset && !content.depth) return out;
    if (auto before = region_before(content)) out.push_back(std::move(*before));
    if (auto after = region_after(content)) out.push_back(std::move(*after));
    return out;
}

std::vector<Rule> invert_variants(const Rule& rule, const GenConfig& cfg) {
    std::vector<Rule> out;
    auto emit = [&out, &cfg](Rule variant, GenTag tag) {
        mark_variant(variant, tag, cfg);
        out.push_back(std::move(variant));
    };

    // The complement of `any` matches nothing, so any-valued parameters
    // yield no variant.
    if (rule.src_addr.kind != AddrSpec::Kind::any) {
        Rule v = rule;
        v.src_addr.negated = !v.src_addr.negated;
        emit(std::move(v), GenTag{GenTag::Kind::inv_src_ip});
    }
    if (rule.dst_addr.kind != AddrSpec::Kind::any) {
        Rule v = rule;
        v.dst_addr.negated = !v.dst_addr.negated;
        emit(std::move(v), GenTag{GenTag::Kind::inv_dst_ip});
    }
    if (rule.src_port.kind != PortSpec::Kind::any) {
        Rule v = rule;
        v.src_port.negated = !v.src_port.negated;
        emit(std::move(v), GenTag{GenTag::Kind::inv_src_port});
    }
    if (rule.dst_port.kind != PortSpec::Kind::any) {
        Rule v = rule;
        v.dst_port.negated = !v.dst_port.negated;
        emit(std::move(v), GenTag{GenTag::Kind::inv_dst_port});
    }
    // Header protocols cannot be negated in Snort syntax, so enumerate
    // the complement instead; `ip` already covers everything.
    if (rule.protocol != Protocol::ip) {
        for (Protocol p : {Protocol::tcp, Protocol::udp, Protocol::icmp}) {
            if (p == rule.protocol) continue;
            Rule v = rule;
            v.protocol = p;
            GenTag tag{GenTag::Kind::inv_protocol};
            tag.new_proto = p;
            emit(std::move(v), tag);
        }
    }
    // Swapping the sides of `<>` changes nothing, so only `->` rules
    // get a direction variant.
    if (rule.direction == Direction::to_dest) {
        Rule v = rule;
        std::swap(v.src_addr, v.dst_addr);
        std::swap(v.src_port, v.dst_port);
        emit(std::move(v), GenTag{GenTag::Kind::inv_direction});
    }

    const auto indices = rule.content_indices();
    for (std::size_t k = 0; k < indices.size(); ++k) {
        Rule v = rule;
        auto& content = std::get<ContentSpec>(v.options[indices[k]]);
        content.negated = !content.negated;
        GenTag tag{GenTag::Kind::inv_content};
        tag.index = static_cast<int>(k);
        emit(std::move(v), tag);
    }
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const auto& content = std::get<ContentSpec>(rule.options[indices[k]]);
        if (auto before = region_before(content)) {
            Rule v = rule;
            std::get<ContentSpec>(v.options[indices[k]]) = std::move(*before);
            GenTag tag{GenTag::Kind::inv_region_before};
            tag.index = static_cast<int>(k);
            emit(std::move(v), tag);
        }
        if (auto after = region_after(content)) {
            Rule v = rule;
            std::get<ContentSpec>(v.options[indices[k]]) = std::move(*after);
            GenTag tag{GenTag::Kind::inv_region_after};
            tag.index = static_cast<int>(k);
            emit(std::move(v), tag);
        }
    }
    return out;
}

std::vector<Rule> content_variants(const Rule& rule, const GenConfig& cfg) {
    std::vector<Rule> out;
    auto emit = [&out, &cfg](Rule variant, GenTag tag) {
        mark_variant(variant, tag, cfg);
        out.push_back(std::move(variant));
    };

    const auto indices = rule.content_indices();
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const auto& content = std::get<ContentSpec>(rule.options[indices[k]]);
        // Wildcarding weakens a pattern; under negation that would
        // narrow the rule instead of generalising it.
        if (content.negated) continue;
        if (content.pattern.size() < cfg.min_content_len) continue;
        const bool uri = content.kind == ContentSpec::Kind::uricontent;

        for (std::size_t p = 0; p < content.pattern.size(); ++p) {
            if (content.pattern[p].is_wildcard()) continue;
            Rule v = rule;
            std::get<ContentSpec>(v.options[indices[k]]).pattern[p] = pattern_wildcard();
            GenTag tag{uri ? GenTag::Kind::urr : GenTag::Kind::cor};
            tag.index = static_cast<int>(k);
            tag.position = static_cast<int>(p);
            emit(std::move(v), tag);
        }

        if (cfg.emit_trims && content.pattern.size() >= cfg.min_content_len + 1) {
            Rule head = rule;
            auto& head_pattern = std::get<ContentSpec>(head.options[indices[k]]).pattern;
            head_pattern.erase(head_pattern.begin());
            GenTag head_tag{GenTag::Kind::trim_head};
            head_tag.index = static_cast<int>(k);
            emit(std::move(head), head_tag);

            Rule tail = rule;
            std::get<ContentSpec>(tail.options[indices[k]]).pattern.pop_back();
            GenTag tail_tag{GenTag::Kind::trim_tail};
            tail_tag.index = static_cast<int>(k);
            emit(std::move(tail), tail_tag);
        }
    }
    return out;
}

GeneralizeResult generalize_file(const std::vector<Rule>& rules, const GenConfig& cfg) {
    GeneralizeResult result;

    for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto* msg = rules[i].msg();
        if (msg && msg->text.find(kFuzzRuleIdMarker) != std::string::npos) {
            result.diagnostics.push_back(
                {i + 1, "rule already carries a FuzzRuleId tag; refusing to generalise twice"});
        }
    }
    if (!result.diagnostics.empty()) {
        result.already_generalised = true;
        return result;
    }

    std::uint32_t next_unnumbered_sid = 3'000'000;
    for (const auto& input : rules) {
        Rule original = input;
        if (!original.sid()) set_sid(original, next_unnumbered_sid++);
        const std::uint64_t base_sid = *original.sid();

        std::vector<Rule> variants;
        if (cfg.mode != GenConfig::Mode::content) {
            auto inverted = invert_variants(original, cfg);
            variants.insert(variants.end(), std::make_move_iterator(inverted.begin()),
                            std::make_move_iterator(inverted.end()));
        }
        if (cfg.mode != GenConfig::Mode::invert) {
            auto wildcarded = content_variants(original, cfg);
            variants.insert(variants.end(), std::make_move_iterator(wildcarded.begin()),
                            std::make_move_iterator(wildcarded.end()));
        }
        for (std::size_t ordinal = 0; ordinal < variants.size(); ++ordinal) {
            set_sid(variants[ordinal],
                    static_cast<std::uint32_t>(2'000'000 + base_sid * 100 + ordinal));
        }

        result.originals += 1;
        result.variants += variants.size();
        result.rules.push_back(std::move(original));
        result.rules.insert(result.rules.end(), std::make_move_iterator(variants.begin()),
                            std::make_move_iterator(variants.end()));
    }
    return result;
}

}  // namespace sigforge
