#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "f2p/errors.hpp"
#include "f2p/sparse.hpp"

namespace f2p {

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace detail

/// Reads a Matrix Market file holding a real (or integer) symmetric matrix
/// in coordinate format. Lower-triangle entries are mirrored into both
/// triangles, indices become 0-based, duplicates are summed. Anything else
/// in the header (general, hermitian, pattern, complex, array, ...) is
/// rejected with UnsupportedFormat; malformed content raises ParseError with
/// the offending line number.
inline SparseSymMatrix read_matrix_market(std::istream& in) {
    std::string line;
    long lineno = 0;

    if (!std::getline(in, line)) throw ParseError("matrix market: empty input", 1);
    ++lineno;
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (detail::lower(banner) != "%%matrixmarket")
        throw ParseError("matrix market: missing %%MatrixMarket banner", lineno);
    if (detail::lower(object) != "matrix")
        throw UnsupportedFormat("matrix market: object must be 'matrix'");
    if (detail::lower(format) != "coordinate")
        throw UnsupportedFormat("matrix market: only coordinate format is supported");
    const std::string f = detail::lower(field);
    if (f != "real" && f != "integer")
        throw UnsupportedFormat("matrix market: field '" + field + "' is not supported");
    if (detail::lower(symmetry) != "symmetric")
        throw UnsupportedFormat("matrix market: symmetry '" + symmetry +
                                "' is not supported (need 'symmetric')");

    // size line (skipping comments and blanks)
    long long rows = 0, cols = 0, nnz = 0;
    for (;;) {
        if (!std::getline(in, line))
            throw ParseError("matrix market: missing size line", lineno);
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream sz(line);
        if (!(sz >> rows >> cols >> nnz))
            throw ParseError("matrix market: malformed size line", lineno);
        break;
    }
    if (rows != cols)
        throw ParseError("matrix market: symmetric matrix must be square", lineno);
    if (rows <= 0) throw ParseError("matrix market: non-positive dimension", lineno);

    std::vector<SparseSymMatrix::Triplet> entries;
    entries.reserve(static_cast<std::size_t>(nnz));
    long long seen = 0;
    while (seen < nnz) {
        if (!std::getline(in, line))
            throw ParseError("matrix market: unexpected end of file (" +
                                 std::to_string(seen) + " of " + std::to_string(nnz) +
                                 " entries)",
                             lineno);
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream es(line);
        long long i = 0, j = 0;
        double v = 0.0;
        if (!(es >> i >> j >> v))
            throw ParseError("matrix market: malformed entry", lineno);
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw ParseError("matrix market: index out of range", lineno);
        if (j > i)
            throw ParseError("matrix market: entry above the diagonal in a symmetric file",
                             lineno);
        entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
        ++seen;
    }
    return SparseSymMatrix::from_triangle(static_cast<int>(rows), std::move(entries));
}

inline SparseSymMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open matrix file: " + path);
    return read_matrix_market(in);
}

}  // namespace f2p
