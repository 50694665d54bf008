#include "fsb/csv.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "fsb/errors.hpp"

namespace fsb {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& s, std::size_t row, std::size_t col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error("CSV: cannot parse '" + s + "' as a number (row " +
                    std::to_string(row) + ", column " + std::to_string(col) +
                    ")");
    }
}

bool looks_numeric(const std::string& s) {
    try {
        std::size_t pos = 0;
        (void)std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

Eigen::MatrixXd read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error("CSV: empty input; expected a header row");
    }
    const auto header = split_commas(line);
    if (header.empty() || looks_numeric(header.front())) {
        throw Error("CSV: missing header row (first line looks numeric)");
    }
    const std::size_t d = header.size();

    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_commas(line);
        if (fields.size() != d) {
            throw Error("CSV: row " + std::to_string(rows + 1) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(d));
        }
        for (std::size_t j = 0; j < d; ++j) {
            values.push_back(parse_number(fields[j], rows + 1, j + 1));
        }
        ++rows;
    }

    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows),
                      static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                values[i * d + j];
        }
    }
    return m;
}

Eigen::MatrixXd read_dataset_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Eigen::MatrixXd& data) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        out << (j ? "," : "") << "x" << (j + 1);
    }
    out << '\n';
    char buf[40];
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", data(i, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
}

void write_dataset_csv_file(const std::string& path,
                            const Eigen::MatrixXd& data) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_dataset_csv(out, data);
}

Eigen::MatrixXd read_matrix_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_commas(line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j) {
            row.push_back(parse_number(fields[j], rows.size() + 1, j + 1));
        }
        if (width == 0) width = row.size();
        if (row.size() != width) {
            throw Error("matrix CSV: ragged rows in '" + path + "'");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.size() != width) {
        throw Error("matrix CSV: expected a square numeric matrix in '" + path +
                    "'");
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
        }
    }
    return m;
}

}  // namespace fsb
