#include "qept/io.hpp"

#include "qept/errors.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qept::io {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("io: cannot open '" + path + "' for writing");
    return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("io: write to '" + path + "' failed");
}

} // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    auto out = open_for_write(path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw IoError("io: row width " + std::to_string(row.size()) +
                          " does not match header width " + std::to_string(header.size()));
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    finish_write(out, path);
}

void write_flat_json(const std::string& path, const FlatDocument& doc) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [key, value] : doc) {
        if (std::holds_alternative<double>(value)) {
            j[key] = std::get<double>(value);
        } else if (std::holds_alternative<std::int64_t>(value)) {
            j[key] = std::get<std::int64_t>(value);
        } else {
            j[key] = std::get<std::string>(value);
        }
    }
    auto out = open_for_write(path);
    out << j.dump(2) << '\n';
    finish_write(out, path);
}

void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
    auto out = open_for_write(path);
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ' ';
            out << format_double(m(r, c).real()) << ' ' << format_double(m(r, c).imag());
        }
        out << '\n';
    }
    finish_write(out, path);
}

ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("io: cannot open '" + path + "' for reading");
    long long rows = 0;
    long long cols = 0;
    if (!(in >> rows >> cols) || rows <= 0 || cols <= 0 || rows > 4096 || cols > 4096)
        throw ParseError("matrix file '" + path + "': bad dimension header");
    ComplexMatrix m(rows, cols);
    for (long long r = 0; r < rows; ++r) {
        for (long long c = 0; c < cols; ++c) {
            double re = 0.0;
            double im = 0.0;
            if (!(in >> re >> im))
                throw ParseError("matrix file '" + path + "': expected " +
                                 std::to_string(2 * rows * cols) + " numbers, ran out at row " +
                                 std::to_string(r) + " col " + std::to_string(c));
            m(r, c) = std::complex<double>(re, im);
        }
    }
    std::string extra;
    if (in >> extra)
        throw ParseError("matrix file '" + path + "': trailing data '" + extra + "'");
    return m;
}

} // namespace qept::io
