#include "srrd/csv.hpp"

#include <charconv>
#include <cmath>

namespace srrd::csv {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        out.emplace_back(trim(field));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

Writer& Writer::cell(std::string_view v) {
    if (!first_) os_ << ',';
    os_ << v;
    first_ = false;
    return *this;
}

Writer& Writer::cell(double v) { return cell(std::string_view(format_real(v))); }
Writer& Writer::cell(long long v) { return cell(std::string_view(std::to_string(v))); }
Writer& Writer::cell(unsigned long long v) { return cell(std::string_view(std::to_string(v))); }

void Writer::end_row() {
    os_ << '\n';
    first_ = true;
}

void Writer::row(const std::vector<std::string>& cells) {
    for (const auto& c : cells) cell(std::string_view(c));
    end_row();
}

}  // namespace srrd::csv
