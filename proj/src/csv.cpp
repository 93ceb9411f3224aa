#include "driftmon/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "driftmon/errors.hpp"

namespace driftmon {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Dataset read_csv(std::istream& in, const Schema& schema) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("csv: empty input");
    }
    const auto header = split_line(line);
    if (header.size() != schema.size()) {
        throw DataError("csv: header has " + std::to_string(header.size()) + " columns, schema has " +
                        std::to_string(schema.size()));
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] != schema.field(i).name) {
            throw DataError("csv: header column " + std::to_string(i + 1) + " is '" + header[i] +
                            "', expected '" + schema.field(i).name + "'");
        }
    }

    Dataset ds{schema, {}};
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != schema.size()) {
            throw DataError("csv: line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(schema.size()));
        }
        Record rec;
        rec.values.reserve(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const std::string& cell = cells[i];
            if (cell.empty()) {
                rec.values.emplace_back(std::monostate{});
                continue;
            }
            if (schema.field(i).kind == FeatureKind::Numeric) {
                double v = 0.0;
                const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
                    throw DataError("csv: line " + std::to_string(line_no) + ", column '" +
                                    schema.field(i).name + "': cannot parse number '" + cell + "'");
                }
                rec.values.emplace_back(v);
            } else {
                rec.values.emplace_back(cell);
            }
        }
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

Dataset read_csv_file(const std::string& path, const Schema& schema) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    return read_csv(in, schema);
}

void write_csv(std::ostream& out, const Dataset& dataset) {
    const Schema& schema = dataset.schema;
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (i) out << ',';
        out << schema.field(i).name;
    }
    out << '\n';
    for (const auto& rec : dataset.records) {
        for (std::size_t i = 0; i < rec.values.size(); ++i) {
            if (i) out << ',';
            const Value& v = rec.values[i];
            if (is_number(v)) {
                out << format_number(as_number(v));
            } else if (is_text(v)) {
                out << as_text(v);
            }
        }
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const Dataset& dataset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path + "'");
    }
    write_csv(out, dataset);
}

}  // namespace driftmon
