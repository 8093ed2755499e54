#pragma once

#include <vector>

#include "sigforge/alert.hpp"

namespace sigforge {

/// Outcome of merging an original-rules alert stream with a
/// generalised-rules alert stream:
///  - fuzz: generalised alerts whose packet no original alert fired on
///  - rejected_fuzz: generalised alerts displaced by an original alert
///    on the same packet
///  - merged: all originals plus fuzz, in chronological order, originals
///    first among equal timestamps
struct MergeResult {
    std::vector<Alert> merged;
    std::vector<Alert> fuzz;
    std::vector<Alert> rejected_fuzz;
};

MergeResult merge(const std::vector<Alert>& original, const std::vector<Alert>& generalised);

}  // namespace sigforge
