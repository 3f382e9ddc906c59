#pragma once
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "wso/oracle.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wso {

struct SpanningTree {
  PointId root = 0;
  std::vector<PointId> parent;  // parent[root] = -1

  int size() const { return int(parent.size()); }
  int max_degree() const;
  bool spans() const;
  template <class Dist>
  double weight(Dist&& dist) const {
    double w = 0.0;
    for (PointId u = 0; u < int(parent.size()); ++u)
      if (parent[u] >= 0) w += dist(u, parent[u]);
    return w;
  }
};

// Tie-breaking perturbation: adds a per-pair draw in [eps/2, eps], fixed once.
// Keeps metrics metric (eps_xy <= eps <= eps_xz + eps_zy).
template <class Dist>
class PerturbedAccessor {
 public:
  PerturbedAccessor(Dist dist, double eps, uint64_t seed)
      : dist_(std::move(dist)), eps_(eps), seed_(seed) {}
  double operator()(PointId a, PointId b) const {
    return dist_(a, b) +
           eps_ * (0.5 + 0.5 * pair_uniform(seed_, HashStream::perturb, a, b));
  }

 private:
  Dist dist_;
  double eps_;
  uint64_t seed_;
};

template <class Dist>
PerturbedAccessor<Dist> perturb_unique(Dist dist, double eps, uint64_t seed) {
  return PerturbedAccessor<Dist>(std::move(dist), eps, seed);
}

// Exact MST, Prim in O(n^2) time and O(n) memory. Frontier scan is OpenMP
// parallel; mst_dense_serial is the plain reference kept for testing.
template <class Dist>
SpanningTree mst_dense(int n, Dist&& dist, PointId root = 0) {
  SpanningTree t;
  t.root = root;
  t.parent.assign(n, -1);
  if (n <= 1) return t;
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<PointId> from(n, root);
  std::vector<uint8_t> done(n, 0);
  done[root] = 1;
  PointId last = root;
  for (int round = 1; round < n; ++round) {
#pragma omp parallel for schedule(static)
    for (PointId v = 0; v < n; ++v) {
      if (done[v]) continue;
      double d = dist(last, v);
      if (d < best[v]) {
        best[v] = d;
        from[v] = last;
      }
    }
    PointId pick = -1;
    double pick_d = std::numeric_limits<double>::infinity();
    for (PointId v = 0; v < n; ++v) {
      if (!done[v] && best[v] < pick_d) {
        pick_d = best[v];
        pick = v;
      }
    }
    done[pick] = 1;
    t.parent[pick] = from[pick];
    last = pick;
  }
  return t;
}

template <class Dist>
SpanningTree mst_dense_serial(int n, Dist&& dist, PointId root = 0) {
  SpanningTree t;
  t.root = root;
  t.parent.assign(n, -1);
  if (n <= 1) return t;
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<PointId> from(n, root);
  std::vector<uint8_t> done(n, 0);
  done[root] = 1;
  PointId last = root;
  for (int round = 1; round < n; ++round) {
    for (PointId v = 0; v < n; ++v) {
      if (done[v]) continue;
      double d = dist(last, v);
      if (d < best[v]) {
        best[v] = d;
        from[v] = last;
      }
    }
    PointId pick = -1;
    double pick_d = std::numeric_limits<double>::infinity();
    for (PointId v = 0; v < n; ++v) {
      if (!done[v] && best[v] < pick_d) {
        pick_d = best[v];
        pick = v;
      }
    }
    done[pick] = 1;
    t.parent[pick] = from[pick];
    last = pick;
  }
  return t;
}

namespace detail {
SpanningTree bounded_degree_transform_impl(
    const SpanningTree& t, const std::function<double(PointId, PointId)>& dist);
}

// Reparent children via phi(i) = ceil(i/2) - 1: degree <= 5, weight <= 2x,
// per-edge d(u, new parent) <= 2 d(u, old parent).
template <class Dist>
SpanningTree bounded_degree_transform(const SpanningTree& t, Dist&& dist) {
  return detail::bounded_degree_transform_impl(
      t, std::function<double(PointId, PointId)>(
             [&](PointId a, PointId b) { return dist(a, b); }));
}

struct HeavyCarving {
  int level = 0;
  std::vector<PointId> centers;
  std::vector<double> radii;
  std::vector<std::vector<PointId>> cells;
};

// Level-l heavy ball carving under the true metric (test oracle only):
// greedily pick the point whose 2^l-point ball has the largest radius.
HeavyCarving heavy_carving(const Metric& m, int level);

struct MstResult {
  SpanningTree tree;
  double weak_weight = 0.0;   // under the (perturbed) weak metric
  bool metric_ok = true;      // sampled triangle validation of the weak metric
  double eps = 0.0;
};

// Perturb -> exact MST under the weak metric -> bounded-degree transform.
// Zero strong oracle queries.
MstResult mst_weak_solve(const WeakOracle& wo, uint64_t seed);

}  // namespace wso
