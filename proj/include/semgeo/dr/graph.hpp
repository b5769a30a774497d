#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>
#include <vector>

#include "semgeo/phate/stages.hpp"
#include "semgeo/projection.hpp"

namespace semgeo {

/// Indices of the k nearest other points of every row, nearest first.
/// Ties break toward the lower index.
inline std::vector<std::vector<Eigen::Index>> knn_indices(const DistanceMatrix& dist, int k) {
  const Eigen::Index n = dist.size();
  if (k < 1) throw GeometryError(GeometryError::Kind::InvalidParameter, "knn: k must be >= 1");
  if (k >= n) {
    throw GeometryError(GeometryError::Kind::KTooLarge,
                        "k=" + std::to_string(k) + " needs at least " + std::to_string(k + 1) + " points, have " + std::to_string(n));
  }
  std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < n; ++i) {
    order.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    auto closer = [&](Eigen::Index a, Eigen::Index b) {
      const double da = dist.values(i, a), db = dist.values(i, b);
      return da < db || (da == db && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + k, order.end(), closer);
    out[static_cast<std::size_t>(i)].assign(order.begin(), order.begin() + k);
  }
  return out;
}

/// Symmetrized k-NN graph: i ~ j if either is among the other's k nearest.
/// Entries hold the edge weight (Euclidean distance, or 1 when `unit`),
/// zero where there is no edge.
inline Matrix knn_graph(const DistanceMatrix& dist, int k, bool unit) {
  const Eigen::Index n = dist.size();
  Matrix a = Matrix::Zero(n, n);
  const auto nbrs = knn_indices(dist, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j : nbrs[static_cast<std::size_t>(i)]) {
      const double w = unit ? 1.0 : dist.values(i, j);
      a(i, j) = w;
      a(j, i) = w;
    }
  }
  return a;
}

/// Component label per node of an adjacency matrix (nonzero = edge),
/// labels numbered in order of first appearance.
inline std::vector<std::size_t> connected_components(const Matrix& adjacency, std::size_t* count = nullptr) {
  const Eigen::Index n = adjacency.rows();
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(static_cast<std::size_t>(n), unset);
  std::size_t next = 0;
  std::vector<Eigen::Index> stack;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (label[static_cast<std::size_t>(s)] != unset) continue;
    label[static_cast<std::size_t>(s)] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Eigen::Index u = stack.back();
      stack.pop_back();
      for (Eigen::Index v = 0; v < n; ++v) {
        if (adjacency(u, v) != 0.0 && label[static_cast<std::size_t>(v)] == unset) {
          label[static_cast<std::size_t>(v)] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  if (count != nullptr) *count = next;
  return label;
}

/// All-pairs shortest path lengths over a weighted adjacency matrix
/// (Dijkstra from every source). Unreachable pairs are +inf.
inline DistanceMatrix shortest_paths(const Matrix& weights, const Execution& ex = {}) {
  const Eigen::Index n = weights.rows();
  std::vector<std::vector<std::pair<Eigen::Index, double>>> adj(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i && weights(i, j) > 0.0) adj[static_cast<std::size_t>(i)].emplace_back(j, weights(i, j));
    }
  }
  DistanceMatrix out{Matrix::Constant(n, n, std::numeric_limits<double>::infinity())};
  parallel_for_rows(static_cast<std::size_t>(n), ex, [&](std::size_t begin, std::size_t end) {
    using Entry = std::pair<double, Eigen::Index>;
    std::vector<double> best(static_cast<std::size_t>(n));
    for (auto s = static_cast<Eigen::Index>(begin); s < static_cast<Eigen::Index>(end); ++s) {
      std::fill(best.begin(), best.end(), std::numeric_limits<double>::infinity());
      std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
      best[static_cast<std::size_t>(s)] = 0.0;
      heap.emplace(0.0, s);
      while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > best[static_cast<std::size_t>(u)]) continue;
        for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
          const double nd = d + w;
          if (nd < best[static_cast<std::size_t>(v)]) {
            best[static_cast<std::size_t>(v)] = nd;
            heap.emplace(nd, v);
          }
        }
      }
      for (Eigen::Index j = 0; j < n; ++j) out.values(s, j) = best[static_cast<std::size_t>(j)];
    }
  });
  // Dijkstra from i and from j can round differently; keep the matrix exactly symmetric.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::min(out.values(i, j), out.values(j, i));
      out.values(i, j) = v;
      out.values(j, i) = v;
    }
  }
  return out;
}

}  // namespace semgeo
