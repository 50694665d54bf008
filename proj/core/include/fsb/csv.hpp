#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace fsb {

/// Dataset CSV: mandatory header row "x1,...,xd", one observation per row,
/// '.' decimal separator. Values are written with %.17g so rewriting a
/// read dataset is byte-stable.
Eigen::MatrixXd read_dataset_csv(std::istream& in);
Eigen::MatrixXd read_dataset_csv_file(const std::string& path);

void write_dataset_csv(std::ostream& out, const Eigen::MatrixXd& data);
void write_dataset_csv_file(const std::string& path,
                            const Eigen::MatrixXd& data);

/// Square numeric matrix from a headerless CSV (used for Mahalanobis A).
Eigen::MatrixXd read_matrix_csv_file(const std::string& path);

}  // namespace fsb
