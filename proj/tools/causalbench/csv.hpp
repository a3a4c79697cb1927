// csv.hpp — RFC-4180 CSV writing with locale-independent number formatting

#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <string_view>

namespace causalbench::cli {

// shortest round-trip representation, identical across runs and locales
inline std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::string csv_quote(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void comment(std::string_view line) { os_ << "# " << line << "\r\n"; }

    CsvWriter& field(std::string_view s) {
        if (!first_) os_ << ',';
        os_ << csv_quote(s);
        first_ = false;
        return *this;
    }
    CsvWriter& field(double x) { return field(format_double(x)); }
    CsvWriter& field(int x) { return field(std::to_string(x)); }
    void end_row() {
        os_ << "\r\n";
        first_ = true;
    }

private:
    std::ostream& os_;
    bool first_ = true;
};

}  // namespace causalbench::cli
