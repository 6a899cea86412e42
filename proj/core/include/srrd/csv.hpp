#ifndef SRRD_CSV_HPP
#define SRRD_CSV_HPP

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace srrd::csv {

/// Shortest decimal form that round-trips; platform independent.
std::string format_real(double v);

std::string_view trim(std::string_view s);

/// Comma split without quoting support; fields are trimmed.
std::vector<std::string> split(std::string_view line, char sep = ',');

/// Row writer that joins cells with commas and ends rows with LF.
class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    Writer& cell(std::string_view v);
    Writer& cell(double v);
    Writer& cell(long long v);
    Writer& cell(unsigned long long v);
    Writer& cell(int v) { return cell(static_cast<long long>(v)); }
    Writer& cell(std::size_t v) { return cell(static_cast<unsigned long long>(v)); }
    void end_row();

    void row(const std::vector<std::string>& cells);

private:
    std::ostream& os_;
    bool first_ = true;
};

}  // namespace srrd::csv

#endif  // SRRD_CSV_HPP
