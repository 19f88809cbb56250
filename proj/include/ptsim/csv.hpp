#pragma once

// Minimal RFC-4180 writer: header row first, fields quoted only when they
// contain a comma, quote or line break, CRLF-free ("\n") line endings, and
// doubles printed with 17 significant digits so values round-trip exactly.

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ptsim::csv {

inline std::string format(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string format(const std::optional<double>& v) { return v ? format(*v) : std::string{}; }

inline std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

class Writer {
public:
    /// Opens `path` for writing. A non-empty `config_hash` is written as a
    /// leading "# config_hash=..." line before the mandatory header.
    Writer(const std::string& path, const std::vector<std::string>& header, const std::string& config_hash = {})
        : out_(path), columns_(header.size()) {
        if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
        if (!config_hash.empty()) out_ << "# config_hash=" << config_hash << '\n';
        row(header);
    }

    void row(const std::vector<std::string>& fields) {
        if (fields.size() != columns_) throw std::logic_error("CSV row has the wrong number of fields");
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << quote(fields[i]);
        }
        out_ << '\n';
        if (!out_) throw std::runtime_error("CSV write failed");
    }

private:
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace ptsim::csv
