#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ecm/sparse_core.hpp"

namespace ecm::testing {

// Random sparse matrix with independent per-cell fill and values in [-1, 1].
inline CrsMatrix make_random_crs(std::mt19937_64& rng, index_t nrows, index_t ncols,
                                 double density) {
  std::bernoulli_distribution fill(density);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<Triplet> entries;
  for (index_t r = 0; r < nrows; ++r) {
    for (index_t c = 0; c < ncols; ++c) {
      if (fill(rng)) entries.push_back({r, static_cast<col_index_t>(c), val(rng)});
    }
  }
  return crs_from_triplets(nrows, ncols, std::move(entries));
}

inline std::vector<double> make_random_vector(std::mt19937_64& rng, index_t n) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = val(rng);
  return x;
}

// Dense reference multiply, the oracle for the sparse kernels.
inline std::vector<double> dense_reference_mv(const CrsMatrix& a, const std::vector<double>& x) {
  std::vector<std::vector<double>> dense(a.nrows, std::vector<double>(a.ncols, 0.0));
  for (index_t r = 0; r < a.nrows; ++r) {
    for (index_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      dense[r][a.col_indices[k]] += a.values[k];
    }
  }
  std::vector<double> y(a.nrows, 0.0);
  for (index_t r = 0; r < a.nrows; ++r) {
    for (index_t c = 0; c < a.ncols; ++c) y[r] += dense[r][c] * x[c];
  }
  return y;
}

inline double inf_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double inf_norm_matrix(const CrsMatrix& a) {
  double m = 0.0;
  for (index_t r = 0; r < a.nrows; ++r) {
    double row = 0.0;
    for (index_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      row += std::abs(a.values[k]);
    }
    m = std::max(m, row);
  }
  return m;
}

inline double inf_norm_vector(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline CrsMatrix make_tridiagonal(index_t n) {
  std::vector<Triplet> entries;
  for (index_t i = 0; i < n; ++i) {
    entries.push_back({i, static_cast<col_index_t>(i), 2.0});
    if (i > 0) entries.push_back({i, static_cast<col_index_t>(i - 1), -1.0});
    if (i + 1 < n) entries.push_back({i, static_cast<col_index_t>(i + 1), -1.0});
  }
  return crs_from_triplets(n, n, std::move(entries));
}

// Symmetric random relabeling of a square matrix's rows and columns.
inline CrsMatrix shuffle_symmetric(const CrsMatrix& a, std::mt19937_64& rng) {
  std::vector<index_t> relabel(a.nrows);
  for (index_t i = 0; i < a.nrows; ++i) relabel[i] = i;
  std::shuffle(relabel.begin(), relabel.end(), rng);
  std::vector<Triplet> entries;
  for (index_t r = 0; r < a.nrows; ++r) {
    for (index_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      entries.push_back(
          {relabel[r], static_cast<col_index_t>(relabel[a.col_indices[k]]), a.values[k]});
    }
  }
  return crs_from_triplets(a.nrows, a.ncols, std::move(entries));
}

}  // namespace ecm::testing
