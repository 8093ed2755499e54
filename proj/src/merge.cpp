#include "sigforge/merge.hpp"

#include <algorithm>
#include <set>

namespace sigforge {

MergeResult merge(const std::vector<Alert>& original, const std::vector<Alert>& generalised) {
    MergeResult result;

    std::set<PacketKey> taken;
    for (const auto& alert : original) taken.insert(key_of(alert));

    for (const auto& alert : generalised) {
        if (taken.contains(key_of(alert))) {
            result.rejected_fuzz.push_back(alert);
        } else {
            result.fuzz.push_back(alert);
        }
    }

    // Originals first, then accepted fuzz; the stable sort keeps that
    // precedence (and input order) among equal timestamps.
    result.merged = original;
    result.merged.insert(result.merged.end(), result.fuzz.begin(), result.fuzz.end());
    std::stable_sort(result.merged.begin(), result.merged.end(),
                     [](const Alert& a, const Alert& b) { return a.ts < b.ts; });
    return result;
}

}  // namespace sigforge
