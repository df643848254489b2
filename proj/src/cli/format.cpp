#include "moran/cli/format.hpp"

#include <charconv>
#include <cmath>

namespace moran::cli {

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::initializer_list<std::string_view> header) {
    for (std::string_view h : header) cell(h);
    end_row();
}

void CsvWriter::separator() {
    if (row_started_) out_ += ',';
    row_started_ = true;
}

CsvWriter& CsvWriter::cell(double value) {
    separator();
    out_ += format_double(value);
    return *this;
}

CsvWriter& CsvWriter::cell(std::size_t value) {
    separator();
    out_ += std::to_string(value);
    return *this;
}

CsvWriter& CsvWriter::cell(std::string_view value) {
    separator();
    out_ += value;
    return *this;
}

void CsvWriter::end_row() {
    out_ += '\n';
    row_started_ = false;
}

}  // namespace moran::cli
