#include "helmspec/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "helmspec/errors.hpp"

namespace helmspec {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

double parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
        fail(ErrorCode::ConfigError, "not a number: '" + std::string(text) + "'");
    return v;
}

long parse_int(std::string_view text) {
    text = trim(text);
    long v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
        fail(ErrorCode::ConfigError, "not an integer: '" + std::string(text) + "'");
    return v;
}

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        auto item = trim(text.substr(pos, end - pos));
        if (!item.empty()) out.push_back(parse_double(item));
        pos = end + 1;
    }
    return out;
}

}  // namespace helmspec
