// io.hpp — stable on-disk formats: CSV tables, flat JSON documents, and a
// plain-text complex-matrix exchange format.
//
// All numbers are written with 17 significant digits so every value
// round-trips to the exact same double; identical data always produces
// byte-identical files.
#pragma once

#include "qept/linalg.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace qept::io {

// One cell of a flat document: a number or a string.
using FlatValue = std::variant<double, std::int64_t, std::string>;
using FlatDocument = std::vector<std::pair<std::string, FlatValue>>;

std::string format_double(double x); // %.17g

// Header row plus data rows, comma separated, newline terminated. An empty
// row list produces a header-only file.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Flat key -> value JSON object; keys keep the given order.
void write_flat_json(const std::string& path, const FlatDocument& doc);

// Matrix exchange format: a "rows cols" header line, then one line per row
// holding "re im" pairs for each entry.
void write_matrix_file(const std::string& path, const ComplexMatrix& m);
ComplexMatrix read_matrix_file(const std::string& path);

} // namespace qept::io
