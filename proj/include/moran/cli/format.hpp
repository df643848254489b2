#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

namespace moran::cli {

// 17 significant digits, '.' separator, independent of the global locale.
// Infinities print as "inf" / "-inf".
std::string format_double(double value);

class CsvWriter {
public:
    explicit CsvWriter(std::initializer_list<std::string_view> header);

    CsvWriter& cell(double value);
    CsvWriter& cell(std::size_t value);
    CsvWriter& cell(std::string_view value);
    void end_row();

    const std::string& str() const noexcept { return out_; }

private:
    void separator();

    std::string out_;
    bool row_started_ = false;
};

}  // namespace moran::cli
