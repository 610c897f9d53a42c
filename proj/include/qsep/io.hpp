#pragma once

// io.hpp — flat result tables with locale-independent CSV and JSON writers,
// plus the start:end:count grid syntax.

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qsep/errors.hpp"

namespace qsep {

struct Cell {
    enum class Kind { Empty, Num, Int, Text };
    Kind kind = Kind::Empty;
    double num = 0.0;
    std::int64_t integer = 0;
    std::string text;

    static Cell empty() { return Cell{}; }
    static Cell number(double v) { return Cell{Kind::Num, v, 0, {}}; }
    static Cell count(std::int64_t v) { return Cell{Kind::Int, 0.0, v, {}}; }
    static Cell label(std::string s) { return Cell{Kind::Text, 0.0, 0, std::move(s)}; }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::vector<Cell>& add_row() {
        rows.emplace_back(columns.size());
        return rows.back();
    }
};

// shortest round-trip decimal form, '.' separator, no locale involvement
inline std::string format_number(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

inline std::string format_cell(const Cell& c) {
    switch (c.kind) {
        case Cell::Kind::Empty: return "";
        case Cell::Kind::Num: return format_number(c.num);
        case Cell::Kind::Int: return std::to_string(c.integer);
        case Cell::Kind::Text: return c.text;
    }
    return "";
}

inline void write_csv(const Table& t, std::ostream& os) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_cell(row[i]);
        os << "\r\n";
    }
}

// array of flat records with the CSV column names as keys
inline void write_json(const Table& t, std::ostream& os) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json rec = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const Cell& c = row[i];
            switch (c.kind) {
                case Cell::Kind::Empty: rec[t.columns[i]] = nullptr; break;
                case Cell::Kind::Num: rec[t.columns[i]] = c.num; break;
                case Cell::Kind::Int: rec[t.columns[i]] = c.integer; break;
                case Cell::Kind::Text: rec[t.columns[i]] = c.text; break;
            }
        }
        arr.push_back(std::move(rec));
    }
    os << arr.dump(2) << '\n';
}

// "start:end:count", endpoints inclusive; count = 1 requires start == end
struct GridSpec {
    double start = 0.0;
    double end = 0.0;
    long count = 1;

    static GridSpec parse(const std::string& s) {
        const auto c1 = s.find(':');
        const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw DomainError("grid spec must be start:end:count, got '" + s + "'");
        GridSpec g;
        try {
            g.start = std::stod(s.substr(0, c1));
            g.end = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
            g.count = std::stol(s.substr(c2 + 1));
        } catch (const std::exception&) {
            throw DomainError("grid spec must be numeric start:end:count, got '" + s + "'");
        }
        if (g.count < 1) throw DomainError("grid count must be >= 1");
        if (g.count == 1 && g.start != g.end)
            throw DomainError("grid with count 1 requires start == end");
        return g;
    }

    std::vector<double> points() const {
        std::vector<double> p(count);
        if (count == 1) {
            p[0] = start;
            return p;
        }
        for (long i = 0; i < count; ++i)
            p[i] = start + (end - start) * double(i) / double(count - 1);
        return p;
    }
};

} // namespace qsep
