#include "ecm/sparse_core.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <thread>
#include <utility>

namespace ecm {

namespace {

// Runs fn(begin, end) over [0, n) in contiguous blocks, one per worker.
template <typename Fn>
void parallel_blocks(index_t n, unsigned nthreads, Fn&& fn) {
  if (nthreads <= 1 || n < 2) {
    fn(index_t{0}, n);
    return;
  }
  const index_t workers = std::min<index_t>(nthreads, n);
  const index_t block = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (index_t w = 0; w < workers; ++w) {
    const index_t begin = w * block;
    const index_t end = std::min(n, begin + block);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

void validate(const CrsMatrix& a) {
  if (a.nrows < 0 || a.ncols < 0) throw std::invalid_argument("crs: negative dimension");
  if (static_cast<index_t>(a.row_offsets.size()) != a.nrows + 1) {
    throw std::invalid_argument("crs: row_offsets must have nrows+1 entries");
  }
  if (a.row_offsets.front() != 0) throw std::invalid_argument("crs: row_offsets[0] must be 0");
  for (index_t r = 0; r < a.nrows; ++r) {
    if (a.row_offsets[r + 1] < a.row_offsets[r]) {
      throw std::invalid_argument("crs: row_offsets must be non-decreasing");
    }
  }
  const index_t nnz = a.row_offsets.back();
  if (static_cast<index_t>(a.col_indices.size()) != nnz ||
      static_cast<index_t>(a.values.size()) != nnz) {
    throw std::invalid_argument("crs: col_indices/values size does not match row_offsets");
  }
  for (col_index_t c : a.col_indices) {
    if (c < 0 || c >= a.ncols) throw std::invalid_argument("crs: column index out of range");
  }
}

CrsMatrix crs_from_triplets(index_t nrows, index_t ncols, std::vector<Triplet> entries) {
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= nrows || e.col < 0 || e.col >= ncols) {
      throw std::invalid_argument("triplet index out of range");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& x, const Triplet& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });

  CrsMatrix a;
  a.nrows = nrows;
  a.ncols = ncols;
  a.row_offsets.assign(nrows + 1, 0);
  a.col_indices.reserve(entries.size());
  a.values.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col) {
      a.values.back() += entries[i].value;  // duplicates sum
      continue;
    }
    a.row_offsets[entries[i].row + 1] += 1;
    a.col_indices.push_back(entries[i].col);
    a.values.push_back(entries[i].value);
  }
  std::partial_sum(a.row_offsets.begin(), a.row_offsets.end(), a.row_offsets.begin());
  return a;
}

SellCSigmaMatrix crs_to_sell(const CrsMatrix& a, index_t chunk_height, index_t sort_window) {
  validate(a);
  if (chunk_height < 1) throw std::invalid_argument("sell: chunk_height must be >= 1");
  if (sort_window < 1) throw std::invalid_argument("sell: sort_window must be >= 1");

  SellCSigmaMatrix s;
  s.nrows = a.nrows;
  s.ncols = a.ncols;
  s.chunk_height = chunk_height;
  s.sort_window = sort_window;
  s.nnz = a.nnz();

  // Sort rows by descending length inside each window, stable on the
  // original index. Windows are aligned to row 0; a trailing partial
  // window sorts as-is.
  s.row_perm.resize(a.nrows);
  std::iota(s.row_perm.begin(), s.row_perm.end(), index_t{0});
  for (index_t w = 0; w < a.nrows; w += sort_window) {
    const index_t end = std::min(a.nrows, w + sort_window);
    std::stable_sort(s.row_perm.begin() + w, s.row_perm.begin() + end,
                     [&a](index_t x, index_t y) { return a.row_length(x) > a.row_length(y); });
  }
  s.inverse_perm.resize(a.nrows);
  for (index_t p = 0; p < a.nrows; ++p) s.inverse_perm[s.row_perm[p]] = p;

  const index_t nchunks = (a.nrows + chunk_height - 1) / chunk_height;
  s.chunk_lengths.assign(nchunks, 0);
  s.chunk_offsets.assign(nchunks + 1, 0);
  for (index_t c = 0; c < nchunks; ++c) {
    index_t len = 0;
    for (index_t i = 0; i < chunk_height; ++i) {
      const index_t p = c * chunk_height + i;
      if (p < a.nrows) len = std::max(len, a.row_length(s.row_perm[p]));
    }
    s.chunk_lengths[c] = len;
    s.chunk_offsets[c + 1] = s.chunk_offsets[c] + chunk_height * len;
  }

  const col_index_t pad_col = a.ncols > 0 ? static_cast<col_index_t>(a.ncols - 1) : 0;
  s.col_indices.assign(s.stored(), pad_col);
  s.values.assign(s.stored(), 0.0);
  for (index_t c = 0; c < nchunks; ++c) {
    const index_t base = s.chunk_offsets[c];
    for (index_t i = 0; i < chunk_height; ++i) {
      const index_t p = c * chunk_height + i;
      if (p >= a.nrows) continue;  // phantom rows of the last chunk stay padded
      const index_t row = s.row_perm[p];
      const index_t start = a.row_offsets[row];
      for (index_t j = 0; j < a.row_length(row); ++j) {
        const index_t slot = base + j * chunk_height + i;
        s.col_indices[slot] = a.col_indices[start + j];
        s.values[slot] = a.values[start + j];
      }
    }
  }
  return s;
}

PaddingReport padding_report(const SellCSigmaMatrix& s) {
  PaddingReport r;
  r.nnz = s.nnz;
  r.stored = s.stored();
  r.overhead = r.nnz > 0 ? static_cast<double>(r.stored) / static_cast<double>(r.nnz) - 1.0 : 0.0;
  return r;
}

std::vector<double> spmv_crs(const CrsMatrix& a, std::span<const double> x, unsigned nthreads) {
  if (static_cast<index_t>(x.size()) != a.ncols) {
    throw std::invalid_argument("spmv_crs: x has wrong length");
  }
  std::vector<double> y(a.nrows, 0.0);
  parallel_blocks(a.nrows, nthreads, [&](index_t begin, index_t end) {
    for (index_t r = begin; r < end; ++r) {
      double acc = 0.0;
      for (index_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
        acc += a.values[k] * x[a.col_indices[k]];
      }
      y[r] = acc;
    }
  });
  return y;
}

std::vector<double> spmv_sell(const SellCSigmaMatrix& s, std::span<const double> x,
                              unsigned nthreads) {
  if (static_cast<index_t>(x.size()) != s.ncols) {
    throw std::invalid_argument("spmv_sell: x has wrong length");
  }
  std::vector<double> y(s.nrows, 0.0);
  parallel_blocks(s.nchunks(), nthreads, [&](index_t begin, index_t end) {
    std::vector<double> acc(s.chunk_height);
    for (index_t c = begin; c < end; ++c) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const index_t base = s.chunk_offsets[c];
      for (index_t j = 0; j < s.chunk_lengths[c]; ++j) {
        for (index_t i = 0; i < s.chunk_height; ++i) {
          const index_t slot = base + j * s.chunk_height + i;
          acc[i] += s.values[slot] * x[s.col_indices[slot]];
        }
      }
      for (index_t i = 0; i < s.chunk_height; ++i) {
        const index_t p = c * s.chunk_height + i;
        if (p < s.nrows) y[s.row_perm[p]] = acc[i];
      }
    }
  });
  return y;
}

RcmResult rcm_reorder(const CrsMatrix& a) {
  validate(a);
  if (a.nrows != a.ncols) throw std::invalid_argument("rcm: matrix must be square");
  const index_t n = a.nrows;

  // Adjacency of the symmetrized pattern, self loops dropped.
  std::vector<std::vector<index_t>> adj(n);
  for (index_t r = 0; r < n; ++r) {
    for (index_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      const index_t c = a.col_indices[k];
      if (c == r) continue;
      adj[r].push_back(c);
      adj[c].push_back(r);
    }
  }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }

  auto degree = [&adj](index_t v) { return static_cast<index_t>(adj[v].size()); };

  std::vector<index_t> order;
  order.reserve(n);
  std::vector<char> visited(n, 0);
  std::vector<index_t> by_degree(n);
  std::iota(by_degree.begin(), by_degree.end(), index_t{0});
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](index_t x, index_t y) { return degree(x) < degree(y); });

  for (index_t root : by_degree) {
    if (visited[root]) continue;
    visited[root] = 1;
    std::queue<index_t> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      const index_t v = frontier.front();
      frontier.pop();
      order.push_back(v);
      std::vector<index_t> next;
      for (index_t u : adj[v]) {
        if (!visited[u]) {
          visited[u] = 1;
          next.push_back(u);
        }
      }
      std::stable_sort(next.begin(), next.end(),
                       [&](index_t x, index_t y) { return degree(x) < degree(y); });
      for (index_t u : next) frontier.push(u);
    }
  }
  std::reverse(order.begin(), order.end());

  std::vector<index_t> inverse(n);
  for (index_t p = 0; p < n; ++p) inverse[order[p]] = p;

  // Symmetric permutation: entry (i, j) moves to (inverse[i], inverse[j]).
  std::vector<Triplet> entries;
  entries.reserve(a.nnz());
  for (index_t r = 0; r < n; ++r) {
    for (index_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      entries.push_back({inverse[r], static_cast<col_index_t>(inverse[a.col_indices[k]]),
                         a.values[k]});
    }
  }
  return {crs_from_triplets(n, n, std::move(entries)), std::move(order)};
}

index_t matrix_bandwidth(const CrsMatrix& a) {
  index_t bw = 0;
  for (index_t r = 0; r < a.nrows; ++r) {
    for (index_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      bw = std::max(bw, std::abs(r - static_cast<index_t>(a.col_indices[k])));
    }
  }
  return bw;
}

}  // namespace ecm
