#include "cometh/generators.hpp"

#include <cmath>

namespace cometh {
namespace {

// Sign of the orientation of (a, b, c); 0 when nearly collinear.
int orientation(const std::pair<Real, Real>& a, const std::pair<Real, Real>& b,
                const std::pair<Real, Real>& c, Real eps) {
  const Real det = (b.first - a.first) * (c.second - a.second) -
                   (b.second - a.second) * (c.first - a.first);
  if (std::abs(det) < eps) return 0;
  return det > 0.0 ? 1 : -1;
}

// In-circle determinant: > 0 when d lies inside the circumcircle of the
// counterclockwise triangle (a, b, c).
Real incircle(const std::pair<Real, Real>& a, const std::pair<Real, Real>& b,
              const std::pair<Real, Real>& c, const std::pair<Real, Real>& d) {
  const Real ax = a.first - d.first, ay = a.second - d.second;
  const Real bx = b.first - d.first, by = b.second - d.second;
  const Real cx = c.first - d.first, cy = c.second - d.second;
  const Real a2 = ax * ax + ay * ay;
  const Real b2 = bx * bx + by * by;
  const Real c2 = cx * cx + cy * cy;
  return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) +
         a2 * (bx * cy - by * cx);
}

constexpr Real kGeomEps = 1e-9;

// Delaunay by the empty-circumcircle triangle criterion; O(n^4) but n is
// at most a few dozen here. Requires points in general position; returns
// false when a degenerate configuration is detected so the caller can
// resample.
bool delaunay_edges(const std::vector<std::pair<Real, Real>>& pts,
                    AttributedGraph& g) {
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (orientation(pts[i], pts[j], pts[k], kGeomEps) == 0) return false;

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        // Order (i, j, k) counterclockwise for the in-circle test.
        int ti = i, tj = j, tk = k;
        if (orientation(pts[ti], pts[tj], pts[tk], kGeomEps) < 0)
          std::swap(tj, tk);
        bool empty = true;
        for (int l = 0; l < n && empty; ++l) {
          if (l == i || l == j || l == k) continue;
          const Real det = incircle(pts[ti], pts[tj], pts[tk], pts[l]);
          if (det > -kGeomEps) {
            if (det < kGeomEps) return false;  // near-cocircular, resample
            empty = false;
          }
        }
        if (empty) {
          g.set_edge(i, j, 1);
          g.set_edge(j, k, 1);
          g.set_edge(i, k, 1);
        }
      }
    }
  }
  return true;
}

}  // namespace

GraphDataset generate_planar(int count, int n, std::uint64_t seed) {
  if (n < 3) throw DataError("planar generator needs n >= 3");
  GraphDataset ds;
  ds.a = 1;
  ds.b = 2;
  Rng master(seed);
  for (int c = 0; c < count; ++c) {
    Rng rng = master.child(c);
    bool done = false;
    for (int attempt = 0; attempt < 100 && !done; ++attempt) {
      std::vector<std::pair<Real, Real>> pts(n);
      for (auto& p : pts) p = {rng.uniform01(), rng.uniform01()};
      AttributedGraph g(n, 1, 2);
      if (delaunay_edges(pts, g)) {
        ds.graphs.push_back(std::move(g));
        done = true;
      }
    }
    if (!done)
      throw NumericalError("planar generator failed 100 resampling attempts");
  }
  return ds;
}

GraphDataset generate_sbm(int count, const std::vector<int>& block_sizes,
                          Real p_in, Real p_out, std::uint64_t seed) {
  if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0)
    throw DataError("SBM probabilities must lie in [0, 1]");
  if (block_sizes.empty()) throw DataError("SBM needs at least one block");
  int n = 0;
  std::vector<int> block;
  for (int bi = 0; bi < static_cast<int>(block_sizes.size()); ++bi) {
    if (block_sizes[bi] < 1) throw DataError("SBM block sizes must be >= 1");
    for (int k = 0; k < block_sizes[bi]; ++k) block.push_back(bi);
    n += block_sizes[bi];
  }
  GraphDataset ds;
  ds.a = 1;
  ds.b = 2;
  Rng master(seed);
  for (int c = 0; c < count; ++c) {
    Rng rng = master.child(c);
    AttributedGraph g(n, 1, 2);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Real p = block[i] == block[j] ? p_in : p_out;
        if (rng.uniform01() < p) g.set_edge(i, j, 1);
      }
    }
    ds.graphs.push_back(std::move(g));
  }
  return ds;
}

void merge_datasets(GraphDataset& dst, const GraphDataset& src) {
  if (dst.a != src.a || dst.b != src.b)
    throw DataError("cannot merge datasets with different alphabets");
  dst.graphs.insert(dst.graphs.end(), src.graphs.begin(), src.graphs.end());
}

}  // namespace cometh
