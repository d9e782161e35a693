#include "lobsim/csv.h"

#include <array>
#include <charconv>
#include <stdexcept>

namespace lobsim {

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

double parse_double(std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return v;
}

long long parse_int(std::string_view text) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split_csv(std::string_view line, char sep) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> out;
    while (true) {
        auto pos = line.find(sep);
        out.push_back(line.substr(0, pos));
        if (pos == std::string_view::npos) break;
        line.remove_prefix(pos + 1);
    }
    return out;
}

}  // namespace lobsim
