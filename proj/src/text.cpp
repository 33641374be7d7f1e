#include "shapebench/text.hpp"

#include <charconv>
#include <cstdlib>
#include <system_error>

namespace shapebench {

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::optional<std::vector<double>> parse_double_list(std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view item = text.substr(pos, comma - pos);
        while (!item.empty() && (item.front() == ' ' || item.front() == '\t')) item.remove_prefix(1);
        while (!item.empty() && (item.back() == ' ' || item.back() == '\t')) item.remove_suffix(1);
        if (item.empty()) return std::nullopt;
        double value = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), value);
        if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) return std::nullopt;
        out.push_back(value);
        if (comma == text.size()) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace shapebench
