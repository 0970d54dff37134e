#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ecm {

using index_t = std::int64_t;
// Column indices are 4 bytes wide; the per-nonzero traffic accounting
// (8 value + 4 index bytes) relies on this.
using col_index_t = std::int32_t;

struct Triplet {
  index_t row = 0;
  col_index_t col = 0;
  double value = 0.0;
};

// Compressed Row Storage.
struct CrsMatrix {
  index_t nrows = 0;
  index_t ncols = 0;
  std::vector<index_t> row_offsets;      // nrows+1, monotone, row_offsets[0] == 0
  std::vector<col_index_t> col_indices;  // per nonzero, sorted within each row
  std::vector<double> values;

  index_t nnz() const { return row_offsets.empty() ? 0 : row_offsets.back(); }
  index_t row_length(index_t r) const { return row_offsets[r + 1] - row_offsets[r]; }
};

void validate(const CrsMatrix& a);

// Builds a CRS matrix from unordered triplets; rows end up sorted by
// column and duplicate coordinates are summed.
CrsMatrix crs_from_triplets(index_t nrows, index_t ncols, std::vector<Triplet> entries);

// Chunked, zero-padded, column-major sparse layout. Rows are sorted by
// descending length within windows of sort_window rows, then grouped into
// chunks of chunk_height rows padded to the longest row of the chunk.
struct SellCSigmaMatrix {
  index_t nrows = 0;
  index_t ncols = 0;
  index_t chunk_height = 0;  // C
  index_t sort_window = 0;   // sigma
  index_t nnz = 0;           // original nonzeros, padding excluded
  std::vector<index_t> chunk_offsets;    // nchunks+1, in entries
  std::vector<index_t> chunk_lengths;    // padded row length per chunk
  std::vector<col_index_t> col_indices;  // column-major within each chunk
  std::vector<double> values;
  std::vector<index_t> row_perm;      // row_perm[p] = original row stored at position p
  std::vector<index_t> inverse_perm;  // inverse_perm[r] = storage position of row r

  index_t nchunks() const { return static_cast<index_t>(chunk_lengths.size()); }
  index_t stored() const { return chunk_offsets.empty() ? 0 : chunk_offsets.back(); }
};

// Padding entries carry value 0 and a column index clamped to the last
// valid column so padded gathers stay in bounds. A trailing partial chunk
// is filled up with empty rows.
SellCSigmaMatrix crs_to_sell(const CrsMatrix& a, index_t chunk_height, index_t sort_window);

struct PaddingReport {
  index_t nnz = 0;
  index_t stored = 0;
  double overhead = 0.0;  // stored/nnz - 1
};

PaddingReport padding_report(const SellCSigmaMatrix& s);

// y = A*x. Both kernels produce output in original row order; each output
// element is written by exactly one worker, so results are independent of
// nthreads.
std::vector<double> spmv_crs(const CrsMatrix& a, std::span<const double> x, unsigned nthreads = 1);
std::vector<double> spmv_sell(const SellCSigmaMatrix& s, std::span<const double> x,
                              unsigned nthreads = 1);

struct RcmResult {
  CrsMatrix matrix;
  std::vector<index_t> perm;  // perm[new] = old
};

// Reverse Cuthill-McKee on the (internally symmetrized) sparsity pattern;
// returns the symmetrically permuted matrix.
RcmResult rcm_reorder(const CrsMatrix& a);

// max |i - j| over the stored nonzeros.
index_t matrix_bandwidth(const CrsMatrix& a);

}  // namespace ecm
