#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace sib {

// Labeled table: header row of column names, first column of row IDs,
// numeric cells written with 17 significant digits for lossless round trips.
struct CsvTable {
    std::vector<std::string> column_names;
    std::vector<std::string> row_ids;
    Eigen::MatrixXd values;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

// Convenience writer generating row IDs r1..rn and the given column names
// (or c1..cp when empty).
void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& values,
                      std::vector<std::string> column_names = {},
                      std::vector<std::string> row_ids = {});

std::string format_double(double v);

}  // namespace sib
