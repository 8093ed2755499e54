#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigforge/diag.hpp"
#include "sigforge/rule.hpp"

namespace sigforge {

struct GenConfig {
    enum class Mode { invert, content, both };

    Mode mode = Mode::both;
    // added to the original priority (missing priority counts as 1);
    // larger numbers are less severe
    std::uint32_t priority_offset = 1;
    // contents shorter than this are left alone: wildcarding a 1-byte
    // content would match nearly everything
    std::size_t min_content_len = 2;
    // also emit variants dropping the first / last pattern byte
    bool emit_trims = true;
};

/// One variant per invertible header parameter and per content
/// negation/region, in a fixed order: src ip, dst ip, src port,
/// dst port, protocol complement, direction, then per-content negation
/// followed by region variants. Variants carry their GenTag, a tagged
/// msg, and a demoted priority; sids are assigned by generalize_file.
std::vector<Rule> invert_variants(const Rule& rule, const GenConfig& cfg);

/// Region counterparts of a content restricted by offset/depth: a
/// "before" spec covering starts strictly before the original region
/// and an "after" spec covering starts strictly beyond it. Degenerate
/// regions are skipped.
std::vector<ContentSpec> invert_region(const ContentSpec& content);

/// Per-position wildcard variants (and head/tail trims) for every
/// non-negated content of at least min_content_len pattern bytes.
std::vector<Rule> content_variants(const Rule& rule, const GenConfig& cfg);

struct GeneralizeResult {
    std::vector<Rule> rules;  // each original followed by its variants
    Diagnostics diagnostics;  // 1-based input rule numbers
    bool already_generalised = false;
    std::size_t originals = 0;
    std::size_t variants = 0;
};

/// Expands a rule set. Refuses input that already carries FuzzRuleId
/// tags. Variant sids are 2,000,000 + original sid * 100 + ordinal;
/// originals without a sid are assigned 3,000,000, 3,000,001, ... in
/// file order so their variants stay arithmetically recoverable.
GeneralizeResult generalize_file(const std::vector<Rule>& rules, const GenConfig& cfg);

}  // namespace sigforge
