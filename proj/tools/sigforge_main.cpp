#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sigforge/generalizer.hpp"
#include "sigforge/matcher.hpp"
#include "sigforge/merge.hpp"
#include "sigforge/packet.hpp"
#include "sigforge/rule_parser.hpp"
#include "sigforge/summary.hpp"

namespace fs = std::filesystem;
using namespace sigforge;

namespace {

// Exit codes shared by all subcommands:
//   0 success, 1 stage failure (bad config, undefined variable, write
//   error), 2 unreadable input, 3 backup already exists, 4 input is
//   already generalised.
constexpr int kExitFailure = 1;
constexpr int kExitUnreadable = 2;
constexpr int kExitBackupExists = 3;
constexpr int kExitAlreadyGeneralised = 4;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return buf.str();
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << content;
    out.flush();
    return out.good();
}

void warn_diagnostics(const std::string& path, const Diagnostics& diags) {
    for (const auto& d : diags) {
        std::cerr << "warning: " << path << ":" << d.line << ": " << d.message << "\n";
    }
}

struct GenFlags {
    std::string mode = "both";
    std::uint32_t priority_offset = 1;
    std::size_t min_content_len = 2;
    bool no_trims = false;

    GenConfig to_config() const {
        GenConfig cfg;
        if (mode == "invert") cfg.mode = GenConfig::Mode::invert;
        if (mode == "content") cfg.mode = GenConfig::Mode::content;
        if (mode == "both") cfg.mode = GenConfig::Mode::both;
        cfg.priority_offset = priority_offset;
        cfg.min_content_len = min_content_len;
        cfg.emit_trims = !no_trims;
        return cfg;
    }
};

void add_gen_flags(CLI::App* cmd, GenFlags& flags) {
    cmd->add_option("--mode", flags.mode, "Generalisation mode")
        ->check(CLI::IsMember({"invert", "content", "both"}))
        ->capture_default_str();
    cmd->add_option("--priority-offset", flags.priority_offset,
                    "How much to demote variant priorities")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--min-content-len", flags.min_content_len,
                    "Skip wildcarding contents shorter than this")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--no-trims", flags.no_trims, "Skip head/tail trim variants");
}

std::string serialize_rules(const std::vector<Rule>& rules) {
    std::string out;
    for (const auto& rule : rules) {
        out += serialize_rule(rule);
        out += '\n';
    }
    return out;
}

/// Loads and parses a rules file; nullopt means the caller should exit
/// with kExitUnreadable.
std::optional<ParsedRules> load_rules(const std::string& path) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read rules file '" << path << "'\n";
        return std::nullopt;
    }
    auto parsed = parse_rules_file(*text);
    warn_diagnostics(path, parsed.diagnostics);
    return parsed;
}

std::optional<ParsedPackets> load_packets(const std::string& path) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read packets file '" << path << "'\n";
        return std::nullopt;
    }
    auto parsed = parse_packets_file(*text);
    warn_diagnostics(path, parsed.diagnostics);
    return parsed;
}

/// Empty path yields an empty table; a bad config is a hard error.
std::optional<VarTable> load_vars(const std::string& path) {
    if (path.empty()) return VarTable{};
    auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read vars file '" << path << "'\n";
        return std::nullopt;
    }
    try {
        return parse_var_config(*text);
    } catch (const std::exception& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        return std::nullopt;
    }
}

int cmd_fuzz(const std::string& rules_path, const GenFlags& flags, const std::string& out_path,
             bool force) {
    auto text = read_file(rules_path);
    if (!text) {
        std::cerr << "error: cannot read rules file '" << rules_path << "'\n";
        return kExitUnreadable;
    }
    auto parsed = parse_rules_file(*text);
    warn_diagnostics(rules_path, parsed.diagnostics);

    auto result = generalize_file(parsed.rules, flags.to_config());
    if (result.already_generalised) {
        warn_diagnostics(rules_path, result.diagnostics);
        std::cerr << "error: '" << rules_path << "' is already generalised\n";
        return kExitAlreadyGeneralised;
    }

    std::string output = serialize_rules(result.rules);
    if (!out_path.empty()) {
        if (!write_file(out_path, output)) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return kExitFailure;
        }
    } else {
        std::string backup = rules_path + ".orig";
        if (fs::exists(backup) && !force) {
            std::cerr << "error: backup '" << backup
                      << "' already exists; use --force to overwrite\n";
            return kExitBackupExists;
        }
        if (!write_file(backup, *text) || !write_file(rules_path, output)) {
            std::cerr << "error: cannot rewrite '" << rules_path << "'\n";
            return kExitFailure;
        }
    }
    std::cout << "generalised " << result.originals << " rules into " << result.rules.size()
              << " (" << result.variants << " variants)\n";
    return 0;
}

int cmd_match(const std::string& rules_path, const std::string& packets_path,
              const std::string& vars_path, bool all_matches, const std::string& out_path) {
    auto rules = load_rules(rules_path);
    if (!rules) return kExitUnreadable;
    auto packets = load_packets(packets_path);
    if (!packets) return kExitUnreadable;
    auto vars = load_vars(vars_path);
    if (!vars) return kExitUnreadable;

    std::vector<Alert> alerts;
    try {
        alerts = run_detection(rules->rules, packets->packets, *vars,
                               all_matches ? MatchMode::all_matches : MatchMode::first_match);
    } catch (const VarError& e) {
        std::cerr << "error: " << e.what() << " (define it in a vars file)\n";
        return kExitFailure;
    }

    std::string output = format_alert_file(alerts);
    if (out_path.empty()) {
        std::cout << output;
    } else {
        if (!write_file(out_path, output)) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return kExitFailure;
        }
        std::cout << alerts.size() << " alerts from " << packets->packets.size()
                  << " packets\n";
    }
    return 0;
}

int cmd_merge(const std::string& original_path, const std::string& generalised_path) {
    auto original_text = read_file(original_path);
    if (!original_text) {
        std::cerr << "error: cannot read alert file '" << original_path << "'\n";
        return kExitUnreadable;
    }
    auto generalised_text = read_file(generalised_path);
    if (!generalised_text) {
        std::cerr << "error: cannot read alert file '" << generalised_path << "'\n";
        return kExitUnreadable;
    }
    auto original = parse_alert_file(*original_text);
    warn_diagnostics(original_path, original.diagnostics);
    auto generalised = parse_alert_file(*generalised_text);
    warn_diagnostics(generalised_path, generalised.diagnostics);

    auto result = merge(original.alerts, generalised.alerts);
    for (const auto& [suffix, alerts] :
         {std::pair{".merged", &result.merged}, {".fuzz", &result.fuzz},
          {".rejected_fuzz", &result.rejected_fuzz}}) {
        std::string path = generalised_path + suffix;
        if (!write_file(path, format_alert_file(*alerts))) {
            std::cerr << "error: cannot write '" << path << "'\n";
            return kExitFailure;
        }
    }
    std::cout << "merged " << result.merged.size() << " alerts (" << original.alerts.size()
              << " original + " << result.fuzz.size() << " fuzz), " << result.rejected_fuzz.size()
              << " rejected\n";
    return 0;
}

int cmd_summarize(const std::string& alerts_path, std::optional<std::uint64_t> max_frequency,
                  bool as_json, const std::string& out_path) {
    auto text = read_file(alerts_path);
    if (!text) {
        std::cerr << "error: cannot read alert file '" << alerts_path << "'\n";
        return kExitUnreadable;
    }
    auto parsed = parse_alert_file(*text);
    warn_diagnostics(alerts_path, parsed.diagnostics);

    auto report = summarize(parsed.alerts, max_frequency);
    std::string output = as_json ? render_json(report) : render_text(report);
    if (out_path.empty()) {
        std::cout << output;
    } else if (!write_file(out_path, output)) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return kExitFailure;
    }
    return 0;
}

int cmd_pipeline(const std::string& rules_path, const std::string& packets_path,
                 const std::string& vars_path, const std::string& out_dir, const GenFlags& flags,
                 std::optional<std::uint64_t> max_frequency) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "pipeline stage setup: cannot create '" << out_dir << "': " << ec.message()
                  << "\n";
        return kExitFailure;
    }
    auto out = [&out_dir](const std::string& name) { return (fs::path(out_dir) / name).string(); };

    auto rules = load_rules(rules_path);
    if (!rules) return kExitUnreadable;
    auto packets = load_packets(packets_path);
    if (!packets) return kExitUnreadable;
    auto vars = load_vars(vars_path);
    if (!vars) return kExitUnreadable;

    auto generalised = generalize_file(rules->rules, flags.to_config());
    if (generalised.already_generalised) {
        warn_diagnostics(rules_path, generalised.diagnostics);
        std::cerr << "pipeline stage fuzz: input is already generalised\n";
        return kExitAlreadyGeneralised;
    }
    if (!write_file(out("generalised.rules"), serialize_rules(generalised.rules))) {
        std::cerr << "pipeline stage fuzz: cannot write generalised.rules\n";
        return kExitFailure;
    }

    std::vector<Alert> original_alerts, generalised_alerts;
    try {
        original_alerts =
            run_detection(rules->rules, packets->packets, *vars, MatchMode::first_match);
        generalised_alerts =
            run_detection(generalised.rules, packets->packets, *vars, MatchMode::first_match);
    } catch (const VarError& e) {
        std::cerr << "pipeline stage match: " << e.what() << "\n";
        return kExitFailure;
    }
    if (!write_file(out("original.alerts"), format_alert_file(original_alerts)) ||
        !write_file(out("generalised.alerts"), format_alert_file(generalised_alerts))) {
        std::cerr << "pipeline stage match: cannot write alert files\n";
        return kExitFailure;
    }

    auto merged = merge(original_alerts, generalised_alerts);
    std::string merge_base = out("generalised.alerts");
    if (!write_file(merge_base + ".merged", format_alert_file(merged.merged)) ||
        !write_file(merge_base + ".fuzz", format_alert_file(merged.fuzz)) ||
        !write_file(merge_base + ".rejected_fuzz", format_alert_file(merged.rejected_fuzz))) {
        std::cerr << "pipeline stage merge: cannot write merge outputs\n";
        return kExitFailure;
    }

    auto report = summarize(merged.merged, max_frequency);
    std::string rendered = render_text(report);
    if (!write_file(out("summary.txt"), rendered)) {
        std::cerr << "pipeline stage summarize: cannot write summary.txt\n";
        return kExitFailure;
    }
    std::cout << rendered;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sigforge: generalise Snort rules, match packet fixtures, merge and "
                 "summarise the resulting alerts"};
    app.require_subcommand(1);

    // fuzz
    auto* fuzz = app.add_subcommand("fuzz", "Expand a rule file with generalised variants");
    std::string fuzz_rules;
    GenFlags fuzz_flags;
    std::string fuzz_out;
    bool fuzz_force = false;
    fuzz->add_option("RULES", fuzz_rules, "Rule file to generalise")->required();
    add_gen_flags(fuzz, fuzz_flags);
    fuzz->add_flag("--force", fuzz_force, "Overwrite an existing .orig backup");
    fuzz->add_option("--out", fuzz_out,
                     "Write here instead of rewriting RULES in place (no backup made)");

    // match
    auto* match = app.add_subcommand("match", "Evaluate rules against a packet fixture");
    std::string match_rules, match_packets, match_vars, match_out;
    bool all_matches = false;
    match->add_option("--rules", match_rules, "Rule file")->required();
    match->add_option("--packets", match_packets, "JSON-lines packet fixture")->required();
    match->add_option("--vars", match_vars, "Variable config (var NAME VALUE lines)")
        ->envname("SIGFORGE_VARS");
    match->add_flag("--all-matches", all_matches,
                    "Report every matching rule instead of one alert per packet");
    match->add_option("--out", match_out, "Alert output path (default: stdout)");

    // merge
    auto* merge_cmd = app.add_subcommand(
        "merge", "Merge original and generalised alert files into .merged/.fuzz/.rejected_fuzz");
    std::string merge_original, merge_generalised;
    merge_cmd->add_option("ORIGINAL", merge_original, "Alert file from the original rules")
        ->required();
    merge_cmd->add_option("GENERALISED", merge_generalised, "Alert file from the generalised rules")
        ->required();

    // summarize
    auto* summarize_cmd =
        app.add_subcommand("summarize", "Frequency summary of an alert file");
    std::string summarize_alerts, summarize_out;
    std::uint64_t summarize_cutoff = 0;
    bool summarize_json = false;
    summarize_cmd->add_option("ALERTS", summarize_alerts, "Alert file")->required();
    auto* cutoff_opt = summarize_cmd->add_option(
        "--max-frequency", summarize_cutoff,
        "Suppress alerts occurring more often than this (likely noise)");
    summarize_cmd->add_flag("--json", summarize_json, "Emit JSON instead of text");
    summarize_cmd->add_option("--out", summarize_out, "Report path (default: stdout)");

    // pipeline
    auto* pipeline = app.add_subcommand(
        "pipeline", "fuzz + match (both rule sets) + merge + summarize in one run");
    std::string pipe_rules, pipe_packets, pipe_vars, pipe_dir = ".";
    GenFlags pipe_flags;
    std::uint64_t pipe_cutoff = 0;
    pipeline->add_option("--rules", pipe_rules, "Rule file")->required();
    pipeline->add_option("--packets", pipe_packets, "JSON-lines packet fixture")->required();
    pipeline->add_option("--vars", pipe_vars, "Variable config")->envname("SIGFORGE_VARS");
    pipeline->add_option("--out-dir", pipe_dir, "Directory for all outputs")
        ->capture_default_str();
    add_gen_flags(pipeline, pipe_flags);
    auto* pipe_cutoff_opt =
        pipeline->add_option("--max-frequency", pipe_cutoff, "Summary frequency cutoff");

    CLI11_PARSE(app, argc, argv);

    if (*fuzz) return cmd_fuzz(fuzz_rules, fuzz_flags, fuzz_out, fuzz_force);
    if (*match) return cmd_match(match_rules, match_packets, match_vars, all_matches, match_out);
    if (*merge_cmd) return cmd_merge(merge_original, merge_generalised);
    if (*summarize_cmd) {
        std::optional<std::uint64_t> cutoff;
        if (cutoff_opt->count() > 0) cutoff = summarize_cutoff;
        return cmd_summarize(summarize_alerts, cutoff, summarize_json, summarize_out);
    }
    if (*pipeline) {
        std::optional<std::uint64_t> cutoff;
        if (pipe_cutoff_opt->count() > 0) cutoff = pipe_cutoff;
        return cmd_pipeline(pipe_rules, pipe_packets, pipe_vars, pipe_dir, pipe_flags, cutoff);
    }
    return 0;
}
