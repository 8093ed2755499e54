#include "sigforge/timestamp.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace sigforge {

namespace {

bool read_int(std::string_view& s, std::size_t digits, int& out) {
    if (s.size() < digits) return false;
    int value = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + digits, value);
    if (ec != std::errc() || p != s.data() + digits) return false;
    s.remove_prefix(digits);
    out = value;
    return true;
}

bool consume(std::string_view& s, char c) {
    if (s.empty() || s.front() != c) return false;
    s.remove_prefix(1);
    return true;
}

}  // namespace

std::string to_string(const Timestamp& ts) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02d/%02d-%02d:%02d:%02d.%06u", ts.month, ts.day, ts.hour,
                  ts.minute, ts.second, ts.micros);
    return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    Timestamp ts;
    int micros = 0;
    if (!read_int(text, 2, ts.month) || !consume(text, '/') || !read_int(text, 2, ts.day)) {
        return std::nullopt;
    }
    // optional weekday infix: 03/31wed-18:00:32.637334
    if (text.size() >= 3 && std::isalpha(static_cast<unsigned char>(text[0])) &&
        std::isalpha(static_cast<unsigned char>(text[1])) &&
        std::isalpha(static_cast<unsigned char>(text[2]))) {
        text.remove_prefix(3);
    }
    if (!consume(text, '-') || !read_int(text, 2, ts.hour) || !consume(text, ':') ||
        !read_int(text, 2, ts.minute) || !consume(text, ':') || !read_int(text, 2, ts.second) ||
        !consume(text, '.') || !read_int(text, 6, micros) || !text.empty()) {
        return std::nullopt;
    }
    ts.micros = static_cast<std::uint32_t>(micros);
    if (ts.month < 1 || ts.month > 12 || ts.day < 1 || ts.day > 31 || ts.hour > 23 ||
        ts.minute > 59 || ts.second > 59) {
        return std::nullopt;
    }
    return ts;
}

}  // namespace sigforge
