// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------
//
// Minimal RFC-4180 writer. LF line endings, one `#` provenance line first,
// then the header row. Numbers use "%.10g" so output is stable across runs.

#ifndef O2I_CSV_HPP
#define O2I_CSV_HPP

#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace o2i::csv {

inline std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

using Cell = std::variant<std::string, double, long long>;

class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    /// `# key=value key=value ...`; must precede the header row.
    void provenance(const std::vector<std::pair<std::string, std::string>>& items) {
        os_ << '#';
        for (const auto& [k, v] : items) os_ << ' ' << k << '=' << v;
        os_ << '\n';
    }

    void header(std::initializer_list<std::string_view> names) {
        columns_ = names.size();
        bool first = true;
        for (auto n : names) {
            if (!first) os_ << ',';
            os_ << quote(n);
            first = false;
        }
        os_ << '\n';
    }

    void row(const std::vector<Cell>& cells) {
        bool first = true;
        for (const auto& c : cells) {
            if (!first) os_ << ',';
            first = false;
            if (const auto* s = std::get_if<std::string>(&c)) os_ << quote(*s);
            else if (const auto* d = std::get_if<double>(&c)) os_ << format_number(*d);
            else os_ << std::get<long long>(c);
        }
        os_ << '\n';
    }

    std::size_t columns() const { return columns_; }

private:
    std::ostream& os_;
    std::size_t columns_ = 0;
};

} // namespace o2i::csv

#endif
