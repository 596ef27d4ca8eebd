#include "cometh/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "cometh/isomorphism.hpp"
#include "cometh/planarity.hpp"

namespace cometh {

Vector degree_histogram(const AttributedGraph& g) {
  const int n = g.n();
  int max_deg = 0;
  std::vector<int> deg(n, 0);
  for (int i = 0; i < n; ++i) {
    deg[i] = g.degree(i);
    max_deg = std::max(max_deg, deg[i]);
  }
  Vector hist = Vector::Zero(max_deg + 1);
  for (int d : deg) hist[d] += 1.0;
  hist /= hist.sum();
  return hist;
}

Vector clustering_coeffs(const AttributedGraph& g) {
  const int n = g.n();
  Vector coeffs = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    const int d = g.degree(i);
    if (d < 2) continue;
    int triangles = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i || !g.has_edge(i, j)) continue;
      for (int k = j + 1; k < n; ++k)
        if (k != i && g.has_edge(i, k) && g.has_edge(j, k)) ++triangles;
    }
    coeffs[i] = 2.0 * triangles / (static_cast<Real>(d) * (d - 1));
  }
  return coeffs;
}

IntMatrix orbit4_counts(const AttributedGraph& g) {
  const int n = g.n();
  IntMatrix counts = IntMatrix::Zero(n, kOrbitCount);
  if (n < 4) return counts;

  int quad[4];
  int deg[4];
  for (quad[0] = 0; quad[0] < n; ++quad[0]) {
    for (quad[1] = quad[0] + 1; quad[1] < n; ++quad[1]) {
      for (quad[2] = quad[1] + 1; quad[2] < n; ++quad[2]) {
        for (quad[3] = quad[2] + 1; quad[3] < n; ++quad[3]) {
          int edges = 0;
          for (int x = 0; x < 4; ++x) deg[x] = 0;
          for (int x = 0; x < 4; ++x) {
            for (int y = x + 1; y < 4; ++y) {
              if (g.has_edge(quad[x], quad[y])) {
                ++edges;
                ++deg[x];
                ++deg[y];
              }
            }
          }
          if (edges < 3) continue;  // cannot be connected
          // Connectivity: with >= 3 edges on 4 vertices, disconnected
          // cases are exactly "triangle + isolated vertex".
          if (edges == 3 &&
              (deg[0] == 0 || deg[1] == 0 || deg[2] == 0 || deg[3] == 0))
            continue;
          for (int x = 0; x < 4; ++x) {
            int orbit = -1;
            switch (edges) {
              case 3:  // path or star
                if (deg[0] + deg[1] + deg[2] + deg[3] == 6) {
                  const bool star =
                      deg[0] == 3 || deg[1] == 3 || deg[2] == 3 || deg[3] == 3;
                  if (star)
                    orbit = deg[x] == 3 ? 3 : 2;
                  else
                    orbit = deg[x] == 1 ? 0 : 1;
                }
                break;
              case 4:  // cycle or paw
                if (deg[0] == 2 && deg[1] == 2 && deg[2] == 2 && deg[3] == 2) {
                  orbit = 4;
                } else {  // degrees 1,2,2,3
                  if (deg[x] == 1)
                    orbit = 5;
                  else if (deg[x] == 2)
                    orbit = 6;
                  else
                    orbit = 7;
                }
                break;
              case 5:  // diamond, degrees 2,2,3,3
                orbit = deg[x] == 2 ? 8 : 9;
                break;
              case 6:  // clique
                orbit = 10;
                break;
            }
            if (orbit >= 0) ++counts(quad[x], orbit);
          }
        }
      }
    }
  }
  return counts;
}

Vector laplacian_spectrum(const AttributedGraph& g) {
  const Matrix a = adjacency_matrix(g);
  const Matrix laplacian =
      Matrix(a.rowwise().sum().asDiagonal()) - a;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian);
  if (solver.info() != Eigen::Success)
    throw NumericalError("Laplacian eigendecomposition failed");
  return solver.eigenvalues();
}

int triangle_count(const AttributedGraph& g) {
  const Matrix a = adjacency_matrix(g);
  const Matrix a3 = a * a * a;
  return static_cast<int>(std::llround(a3.trace() / 6.0));
}

namespace {

std::vector<Vector> statistic_histograms(
    const std::vector<AttributedGraph>& graphs, GraphStatistic statistic,
    Real spectrum_max) {
  std::vector<Vector> hists;
  hists.reserve(graphs.size());
  for (const auto& g : graphs) {
    switch (statistic) {
      case GraphStatistic::kDegree:
        hists.push_back(degree_histogram(g));
        break;
      case GraphStatistic::kClustering: {
        const Vector c = clustering_coeffs(g);
        Vector hist = Vector::Zero(100);
        for (int i = 0; i < c.size(); ++i) {
          const int bin = std::min(99, static_cast<int>(c[i] * 100.0));
          hist[bin] += 1.0;
        }
        hist /= static_cast<Real>(c.size());
        hists.push_back(std::move(hist));
        break;
      }
      case GraphStatistic::kOrbit: {
        const IntMatrix counts = orbit4_counts(g);
        Vector hist = Vector::Zero(kOrbitCount);
        for (int i = 0; i < counts.rows(); ++i)
          for (int o = 0; o < kOrbitCount; ++o) hist[o] += counts(i, o);
        const Real total = hist.sum();
        if (total > 0.0) hist /= total;
        hists.push_back(std::move(hist));
        break;
      }
      case GraphStatistic::kSpectrum: {
        const Vector eig = laplacian_spectrum(g);
        constexpr int kBins = 200;
        Vector hist = Vector::Zero(kBins);
        for (int i = 0; i < eig.size(); ++i) {
          const Real x = std::clamp(eig[i] / spectrum_max, 0.0, 1.0 - 1e-12);
          hist[static_cast<int>(x * kBins)] += 1.0;
        }
        hist /= static_cast<Real>(eig.size());
        hists.push_back(std::move(hist));
        break;
      }
    }
  }
  return hists;
}

Real tv_distance(const Vector& x, const Vector& y) {
  const int len = static_cast<int>(std::max(x.size(), y.size()));
  Real tv = 0.0;
  for (int i = 0; i < len; ++i) {
    const Real xi = i < x.size() ? x[i] : 0.0;
    const Real yi = i < y.size() ? y[i] : 0.0;
    tv += std::abs(xi - yi);
  }
  return 0.5 * tv;
}

Real mean_kernel(const std::vector<Vector>& a, const std::vector<Vector>& b,
                 Real bandwidth) {
  Real total = 0.0;
  for (const auto& x : a) {
    for (const auto& y : b) {
      const Real tv = tv_distance(x, y);
      total += std::exp(-tv * tv / (2.0 * bandwidth * bandwidth));
    }
  }
  return total / (static_cast<Real>(a.size()) * static_cast<Real>(b.size()));
}

}  // namespace

Real mmd(const std::vector<AttributedGraph>& set_a,
         const std::vector<AttributedGraph>& set_b, GraphStatistic statistic,
         Real bandwidth) {
  if (set_a.empty() || set_b.empty())
    throw DataError("MMD needs two non-empty graph sets");

  Real spectrum_max = 1.0;
  if (statistic == GraphStatistic::kSpectrum) {
    // A shared bin range keeps the estimator symmetric in its arguments.
    for (const auto* set : {&set_a, &set_b})
      for (const auto& g : *set)
        spectrum_max =
            std::max(spectrum_max, laplacian_spectrum(g).maxCoeff() + 1e-9);
  }
  const auto ha = statistic_histograms(set_a, statistic, spectrum_max);
  const auto hb = statistic_histograms(set_b, statistic, spectrum_max);
  const Real value = mean_kernel(ha, ha, bandwidth) +
                     mean_kernel(hb, hb, bandwidth) -
                     2.0 * mean_kernel(ha, hb, bandwidth);
  return std::max(value, 0.0);
}

bool validity_planar(const AttributedGraph& g) {
  return is_connected(g) && is_planar(g);
}

std::string MetricReport::to_text() const {
  std::ostringstream out;
  out.precision(17);
  out << "degree_mmd " << degree_mmd << "\n"
      << "cluster_mmd " << cluster_mmd << "\n"
      << "orbit_mmd " << orbit_mmd << "\n"
      << "spectrum_mmd " << spectrum_mmd << "\n"
      << "validity " << validity << "\n"
      << "uniqueness " << uniqueness << "\n"
      << "novelty " << novelty << "\n"
      << "vun " << vun << "\n"
      << "n_generated " << n_generated << "\n"
      << "n_reference " << n_reference << "\n"
      << "n_train " << n_train << "\n";
  return out.str();
}

std::string MetricReport::to_json() const {
  nlohmann::json j;
  j["degree_mmd"] = degree_mmd;
  j["cluster_mmd"] = cluster_mmd;
  j["orbit_mmd"] = orbit_mmd;
  j["spectrum_mmd"] = spectrum_mmd;
  j["validity"] = validity;
  j["uniqueness"] = uniqueness;
  j["novelty"] = novelty;
  j["vun"] = vun;
  j["n_generated"] = n_generated;
  j["n_reference"] = n_reference;
  j["n_train"] = n_train;
  return j.dump(2);
}

MetricReport vun_report(const std::vector<AttributedGraph>& generated,
                        const std::vector<AttributedGraph>& train_set,
                        const ValidityFn& validity_fn) {
  if (generated.empty() || train_set.empty())
    throw DataError("vun_report needs non-empty generated and train sets");

  MetricReport report;
  report.n_generated = static_cast<int>(generated.size());
  report.n_train = static_cast<int>(train_set.size());

  std::vector<const AttributedGraph*> valid;
  for (const auto& g : generated)
    if (validity_fn(g)) valid.push_back(&g);
  report.validity =
      static_cast<Real>(valid.size()) / static_cast<Real>(generated.size());
  if (valid.empty()) return report;

  // Pairwise isomorphism dedup: keep the first representative per class.
  std::vector<const AttributedGraph*> classes;
  for (const auto* g : valid) {
    bool seen = false;
    for (const auto* rep : classes) {
      if (is_isomorphic(*g, *rep)) {
        seen = true;
        break;
      }
    }
    if (!seen) classes.push_back(g);
  }
  report.uniqueness =
      static_cast<Real>(classes.size()) / static_cast<Real>(valid.size());

  int novel = 0;
  for (const auto* rep : classes) {
    bool known = false;
    for (const auto& t : train_set) {
      if (rep->n() == t.n() && is_isomorphic(*rep, t)) {
        known = true;
        break;
      }
    }
    if (!known) ++novel;
  }
  report.novelty = static_cast<Real>(novel) / static_cast<Real>(classes.size());
  report.vun = static_cast<Real>(novel) / static_cast<Real>(generated.size());
  return report;
}

}  // namespace cometh
