#pragma once

// Minimal CSV and JSON emitters for qfisher reports. Floating-point values are
// written with 17 significant digits so they round-trip exactly.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace qfisher::report {

inline constexpr const char* schema_version = "qfisher/1";

inline std::string number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out + "\"";
}

/// Insertion-ordered JSON object.
class JsonObject {
public:
    JsonObject& add(const std::string& key, double v) { return raw(key, number(v)); }
    JsonObject& add(const std::string& key, const std::string& v) { return raw(key, quoted(v)); }
    JsonObject& add(const std::string& key, const char* v) { return raw(key, quoted(v)); }
    JsonObject& add(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
    JsonObject& add(const std::string& key, std::uint64_t v) { return raw(key, std::to_string(v)); }
    JsonObject& add(const std::string& key, const JsonObject& v) { return raw(key, v.str()); }
    JsonObject& add(const std::string& key, const std::vector<JsonObject>& items) {
        std::string s = "[";
        for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + items[i].str();
        return raw(key, s + "]");
    }

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < fields_.size(); ++i)
            s += (i ? "," : "") + quoted(fields_[i].first) + ":" + fields_[i].second;
        return s + "}";
    }

private:
    JsonObject& raw(const std::string& key, std::string rendered) {
        fields_.emplace_back(key, std::move(rendered));
        return *this;
    }

    std::vector<std::pair<std::string, std::string>> fields_;
};

/// RFC 4180 table: CRLF line endings, fields quoted only when needed.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }

    void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

    std::string str() const {
        std::string s;
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + escape(r[i]);
            s += "\r\n";
        }
        return s;
    }

private:
    static std::string escape(const std::string& cell) {
        if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
        std::string out = "\"";
        for (char c : cell) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
        return out + "\"";
    }

    std::vector<std::vector<std::string>> rows_;
};

} // namespace qfisher::report
