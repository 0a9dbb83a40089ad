#pragma once

// CSV and JSON artifacts. Every artifact starts with the library version and
// the full run configuration; numbers are written with 17 significant digits
// so identical runs give identical bytes.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "helioseis/errors.hpp"

namespace helioseis {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

/// Column-oriented numeric table with the configuration it was produced from.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    json config;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw SchemaError("CSV has no column '" + name + "'");
    }
    std::vector<double> values(const std::string& name) const {
        const std::size_t c = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(row[c]);
        return out;
    }
};

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const CsvTable& table) {
    out << "# helioseis " << kVersion << "\n";
    out << "# config " << table.config.dump() << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << "\n";
    }
}

inline CsvTable parse_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "# config ";
            if (line.rfind(tag, 0) == 0) {
                try {
                    t.config = json::parse(line.substr(tag.size()));
                } catch (const json::exception& e) {
                    throw SchemaError(std::string("CSV config header: ") + e.what());
                }
            }
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            t.columns = cells;
            have_header = true;
            continue;
        }
        if (cells.size() != t.columns.size()) throw SchemaError("CSV row width does not match its header");
        std::vector<double> row;
        for (const auto& c : cells) {
            double v = 0.0;
            const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
            if (res.ec != std::errc() || res.ptr != c.data() + c.size())
                throw SchemaError("CSV cell '" + c + "' is not a number");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw SchemaError("CSV has no header row");
    return t;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    return parse_csv(in);
}

/// {"helioseis": version, "config": ..., "result": ...}
inline json artifact(const json& config, json result) {
    return {{"helioseis", kVersion}, {"config", config}, {"result", std::move(result)}};
}

inline json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

} // namespace helioseis
