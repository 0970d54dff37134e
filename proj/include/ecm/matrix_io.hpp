#pragma once

#include <string>

#include "ecm/sparse_core.hpp"

namespace ecm {

// Reads a Matrix Market coordinate file (real, integer, or pattern;
// general or symmetric; 1-based indices). Symmetric storage is expanded,
// duplicate entries are summed, pattern entries get value 1.0. Errors
// carry the offending line number.
CrsMatrix read_matrix_market(const std::string& path);

// Writes "coordinate real general" with 1-based indices.
void write_matrix_market(const CrsMatrix& a, const std::string& path);

// 27-point stencil matrix on an nx x ny x nz grid: every grid neighbor in
// the 3x3x3 cube contributes a nonzero, 26.0 on the diagonal and -1.0 off
// it. Interior rows have exactly 27 nonzeros.
CrsMatrix generate_hpcg(index_t nx, index_t ny, index_t nz);

}  // namespace ecm
