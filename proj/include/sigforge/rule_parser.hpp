#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "sigforge/diag.hpp"
#include "sigforge/rule.hpp"

namespace sigforge {

/// Raised when a rule references a variable the config does not define,
/// or defines with the wrong kind.
class VarError : public std::runtime_error {
  public:
    explicit VarError(const std::string& name)
        : std::runtime_error("undefined variable: " + name), name_(name) {}
    const std::string& name() const { return name_; }

  private:
    std::string name_;
};

/// One `var NAME value` binding. A value like `any` is usable in both
/// address and port position; others resolve to exactly one kind.
struct VarValue {
    std::optional<AddrSpec> addr;
    std::optional<PortSpec> port;
};

class VarTable {
  public:
    void define(const std::string& name, VarValue value);
    bool defined(const std::string& name) const { return vars_.contains(name); }
    std::size_t size() const { return vars_.size(); }

    /// Throws VarError when the variable is missing or not address-valued.
    const AddrSpec& resolve_addr(const std::string& name) const;
    /// Throws VarError when the variable is missing or not port-valued.
    const PortSpec& resolve_port(const std::string& name) const;

  private:
    std::map<std::string, VarValue> vars_;
};

struct ParsedRules {
    std::vector<Rule> rules;
    Diagnostics diagnostics;
};

/// Parses a whole .rules text: one rule per non-comment, non-blank line.
/// Malformed lines yield a diagnostic and are skipped.
ParsedRules parse_rules_file(const std::string& text);

/// Parses a single rule line; on failure returns nullopt and sets `error`.
std::optional<Rule> parse_rule_line(const std::string& line, std::string& error);

/// Serializes a rule to one line of rule text. The output is canonical:
/// single spaces in the header, options as `name:value; ` with quoted
/// string values.
std::string serialize_rule(const Rule& rule);

/// Parses `var NAME value` config text. Throws std::runtime_error on
/// malformed lines and on duplicate definitions.
VarTable parse_var_config(const std::string& text);

}  // namespace sigforge
