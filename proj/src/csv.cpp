#include "sib/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sib/errors.hpp"

namespace sib {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("empty CSV file: " + path.string());
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_line(line);
    if (header.size() < 2) {
        throw DataError("CSV needs a row-ID column plus data columns: " +
                        path.string());
    }

    CsvTable table;
    table.column_names.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size()) {
            throw DataError("CSV row with " + std::to_string(cells.size()) +
                            " cells, expected " +
                            std::to_string(header.size()) + ": " +
                            path.string());
        }
        table.row_ids.push_back(cells[0]);
        std::vector<double> row;
        row.reserve(cells.size() - 1);
        for (std::size_t j = 1; j < cells.size(); ++j) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cells[j], &used));
                if (used != cells[j].size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw DataError("non-numeric cell '" + cells[j] + "' in " +
                                path.string());
            }
        }
        rows.push_back(std::move(row));
    }
    table.values.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(header.size() - 1));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            table.values(static_cast<Eigen::Index>(i),
                         static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return table;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << "id";
    for (const auto& name : table.column_names) out << ',' << name;
    out << '\n';
    for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
        out << table.row_ids[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
            out << ',' << format_double(table.values(i, j));
        }
        out << '\n';
    }
}

void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& values,
                      std::vector<std::string> column_names,
                      std::vector<std::string> row_ids) {
    CsvTable table;
    if (column_names.empty()) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            column_names.push_back("c" + std::to_string(j + 1));
        }
    }
    if (row_ids.empty()) {
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            row_ids.push_back("r" + std::to_string(i + 1));
        }
    }
    table.column_names = std::move(column_names);
    table.row_ids = std::move(row_ids);
    table.values = values;
    write_csv(path, table);
}

}  // namespace sib
