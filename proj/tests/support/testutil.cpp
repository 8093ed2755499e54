#include "support/testutil.hpp"

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sigforge::testing {

std::filesystem::path data_dir() { return SIGFORGE_TEST_DATA_DIR; }

std::filesystem::path corpus_path() { return data_dir() / "classic_corpus.rules"; }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out.flush().good()) throw std::runtime_error("short write to " + path.string());
}

TempDir::TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    std::ostringstream name;
    name << "sigforge-test-" << ::getpid() << "-" << counter++ << "-" << std::hex << rd();
    path_ = std::filesystem::temp_directory_path() / name.str();
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);  // best effort
}

CliResult run_tool(const std::string& args, const std::string& env_prefix) {
    TempDir capture;
    auto out_path = capture.file("stdout");
    auto err_path = capture.file("stderr");

    std::string cmd;
    if (!env_prefix.empty()) cmd += env_prefix + " ";
    cmd += "\"" SIGFORGE_BIN "\" " + args;
    cmd += " >\"" + out_path.string() + "\" 2>\"" + err_path.string() + "\"";

    int raw = std::system(cmd.c_str());

    CliResult result;
    if (raw != -1 && WIFEXITED(raw)) result.status = WEXITSTATUS(raw);
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

Rule parse_rule_ok(const std::string& line) {
    std::string error;
    auto rule = parse_rule_line(line, error);
    if (!rule) throw std::runtime_error("parse failed: " + error + "\n  on: " + line);
    return *rule;
}

std::vector<Rule> parse_rules_ok(const std::string& text) {
    auto parsed = parse_rules_file(text);
    if (!parsed.diagnostics.empty()) {
        std::ostringstream ss;
        ss << "unexpected diagnostics:";
        for (const auto& d : parsed.diagnostics) ss << "\n  line " << d.line << ": " << d.message;
        throw std::runtime_error(ss.str());
    }
    return parsed.rules;
}

}  // namespace sigforge::testing
