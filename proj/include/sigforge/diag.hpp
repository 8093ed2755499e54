#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sigforge {

/// A non-fatal problem attributed to one line of an input file.
struct ParseDiagnostic {
    std::size_t line = 0;  // 1-based
    std::string message;
};

using Diagnostics = std::vector<ParseDiagnostic>;

}  // namespace sigforge
