#include "ecm/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ecm {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

// getline that tolerates CRLF input.
bool next_line(std::istream& in, std::string& text) {
  if (!std::getline(in, text)) return false;
  if (!text.empty() && text.back() == '\r') text.pop_back();
  return true;
}

}  // namespace

CrsMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");

  std::string text;
  std::size_t lineno = 0;

  // Header: %%MatrixMarket matrix coordinate <field> <symmetry>
  if (!next_line(in, text)) fail(path, 1, "empty file");
  ++lineno;
  std::istringstream header(lower(text));
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket") fail(path, lineno, "not a Matrix Market file");
  if (object != "matrix" || format != "coordinate") {
    fail(path, lineno, "unsupported header '" + text + "' (need: matrix coordinate)");
  }
  const bool pattern = field == "pattern";
  if (field != "real" && field != "integer" && !pattern) {
    fail(path, lineno, "unsupported field '" + field + "' (need: real, integer, or pattern)");
  }
  const bool symmetric = symmetry == "symmetric";
  if (symmetry != "general" && !symmetric) {
    fail(path, lineno, "unsupported symmetry '" + symmetry + "' (need: general or symmetric)");
  }

  index_t nrows = 0, ncols = 0, declared = 0;
  while (next_line(in, text)) {
    ++lineno;
    if (text.empty() || text[0] == '%') continue;
    std::istringstream sizes(text);
    if (!(sizes >> nrows >> ncols >> declared)) fail(path, lineno, "malformed size line");
    break;
  }
  if (nrows < 0 || ncols < 0 || declared < 0) fail(path, lineno, "negative size");

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(symmetric ? 2 * declared : declared));
  index_t seen = 0;
  while (next_line(in, text)) {
    ++lineno;
    if (text.empty()) continue;
    if (text[0] == '%') continue;
    std::istringstream entry(text);
    index_t i = 0, j = 0;
    double v = 1.0;
    if (!(entry >> i >> j)) fail(path, lineno, "malformed entry");
    if (!pattern && !(entry >> v)) fail(path, lineno, "missing value");
    if (i < 1 || i > nrows || j < 1 || j > ncols) {
      fail(path, lineno, "index (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") out of range for " + std::to_string(nrows) + "x" +
                             std::to_string(ncols));
    }
    ++seen;
    if (seen > declared) {
      fail(path, lineno, "more than the declared " + std::to_string(declared) + " entries");
    }
    entries.push_back({i - 1, static_cast<col_index_t>(j - 1), v});
    if (symmetric && i != j) entries.push_back({j - 1, static_cast<col_index_t>(i - 1), v});
  }
  if (seen != declared) {
    fail(path, lineno, "expected " + std::to_string(declared) + " entries, found " +
                           std::to_string(seen));
  }
  return crs_from_triplets(nrows, ncols, std::move(entries));
}

void write_matrix_market(const CrsMatrix& a, const std::string& path) {
  validate(a);
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.nrows << " " << a.ncols << " " << a.nnz() << "\n";
  out.precision(17);
  for (index_t r = 0; r < a.nrows; ++r) {
    for (index_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      out << r + 1 << " " << a.col_indices[k] + 1 << " " << a.values[k] << "\n";
    }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

CrsMatrix generate_hpcg(index_t nx, index_t ny, index_t nz) {
  if (nx < 1 || ny < 1 || nz < 1) {
    throw std::invalid_argument("hpcg generator: dimensions must be >= 1");
  }
  // Column indices are 32-bit; refuse grids whose row count cannot be one.
  const __int128 total = static_cast<__int128>(nx) * ny * nz;
  if (total > 0x7fffffff) {
    throw std::invalid_argument("hpcg generator: nx*ny*nz exceeds the 32-bit index range");
  }
  const index_t n = static_cast<index_t>(total);

  CrsMatrix a;
  a.nrows = n;
  a.ncols = n;
  a.row_offsets.assign(n + 1, 0);

  auto span = [](index_t i, index_t dim) { return std::min(i + 1, dim - 1) - std::max<index_t>(i - 1, 0) + 1; };
  for (index_t iz = 0; iz < nz; ++iz) {
    for (index_t iy = 0; iy < ny; ++iy) {
      for (index_t ix = 0; ix < nx; ++ix) {
        const index_t row = ix + nx * (iy + ny * iz);
        a.row_offsets[row + 1] = span(ix, nx) * span(iy, ny) * span(iz, nz);
      }
    }
  }
  for (index_t r = 0; r < n; ++r) a.row_offsets[r + 1] += a.row_offsets[r];

  a.col_indices.resize(a.nnz());
  a.values.resize(a.nnz());
  for (index_t iz = 0; iz < nz; ++iz) {
    for (index_t iy = 0; iy < ny; ++iy) {
      for (index_t ix = 0; ix < nx; ++ix) {
        const index_t row = ix + nx * (iy + ny * iz);
        index_t k = a.row_offsets[row];
        for (index_t dz = -1; dz <= 1; ++dz) {
          for (index_t dy = -1; dy <= 1; ++dy) {
            for (index_t dx = -1; dx <= 1; ++dx) {
              const index_t jx = ix + dx, jy = iy + dy, jz = iz + dz;
              if (jx < 0 || jx >= nx || jy < 0 || jy >= ny || jz < 0 || jz >= nz) continue;
              const index_t col = jx + nx * (jy + ny * jz);
              a.col_indices[k] = static_cast<col_index_t>(col);
              a.values[k] = col == row ? 26.0 : -1.0;
              ++k;
            }
          }
        }
      }
    }
  }
  return a;
}

}  // namespace ecm
