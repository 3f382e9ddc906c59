#include "wso/mst.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace wso {

int SpanningTree::max_degree() const {
  std::vector<int> deg(parent.size(), 0);
  for (PointId u = 0; u < int(parent.size()); ++u) {
    if (parent[u] < 0) continue;
    ++deg[u];
    ++deg[parent[u]];
  }
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

bool SpanningTree::spans() const {
  int n = size();
  if (n == 0) return false;
  int roots = 0;
  for (PointId u = 0; u < n; ++u) {
    if (parent[u] < 0) {
      if (u != root) return false;
      ++roots;
    } else if (parent[u] >= n) {
      return false;
    }
  }
  if (roots != 1) return false;
  // n-1 parent edges and acyclic reachability to the root => spanning.
  std::vector<int8_t> state(n, 0);  // 0 unseen, 1 in progress, 2 done
  for (PointId u = 0; u < n; ++u) {
    PointId v = u;
    std::vector<PointId> path;
    while (v >= 0 && state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = parent[v];
    }
    if (v >= 0 && state[v] == 1) return false;  // cycle
    for (PointId p : path) state[p] = 2;
  }
  return true;
}

namespace detail {

SpanningTree bounded_degree_transform_impl(
    const SpanningTree& t, const std::function<double(PointId, PointId)>& dist) {
  const int n = t.size();
  SpanningTree out;
  out.root = t.root;
  out.parent.assign(n, -1);
  if (n <= 1) return out;

  std::vector<std::vector<PointId>> children(n);
  for (PointId u = 0; u < n; ++u)
    if (t.parent[u] >= 0) children[t.parent[u]].push_back(u);

  for (PointId u = 0; u < n; ++u) {
    auto& cs = children[u];
    if (cs.empty()) continue;
    std::sort(cs.begin(), cs.end(), [&](PointId a, PointId b) {
      double da = dist(u, a), db = dist(u, b);
      return da < db || (da == db && a < b);
    });
    // seq = (u, c1, c2, ...); child i reparents to seq[ceil(i/2) - 1].
    for (size_t i = 1; i <= cs.size(); ++i) {
      size_t phi = (i + 1) / 2 - 1;
      out.parent[cs[i - 1]] = phi == 0 ? u : cs[phi - 1];
    }
  }
  return out;
}

}  // namespace detail

HeavyCarving heavy_carving(const Metric& m, int level) {
  const int n = m.size();
  const int ball_size = 1 << level;
  if (ball_size > n)
    throw std::invalid_argument("heavy_carving: 2^level exceeds n");

  HeavyCarving hc;
  hc.level = level;

  // Ball of each point: its ball_size nearest points (itself included),
  // ties broken by index; radius = distance to the farthest of them.
  std::vector<std::vector<PointId>> balls(n);
  std::vector<double> radii(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (PointId v = 0; v < n; ++v) {
    std::vector<PointId> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::nth_element(idx.begin(), idx.begin() + (ball_size - 1), idx.end(),
                     [&](PointId a, PointId b) {
                       double da = m(v, a), db = m(v, b);
                       return da < db || (da == db && a < b);
                     });
    idx.resize(ball_size);
    radii[v] = m(v, idx[ball_size - 1]);
    balls[v] = std::move(idx);
  }

  std::vector<uint8_t> taken(n, 0);
  int remaining = n;
  while (remaining > 0) {
    PointId pick = -1;
    for (PointId v = 0; v < n; ++v) {
      if (taken[v]) continue;
      if (pick < 0 || radii[v] > radii[pick]) pick = v;
    }
    std::vector<PointId> cell;
    for (PointId p : balls[pick])
      if (!taken[p]) {
        taken[p] = 1;
        cell.push_back(p);
        --remaining;
      }
    if (!taken[pick]) {
      taken[pick] = 1;
      cell.push_back(pick);
      --remaining;
    }
    std::sort(cell.begin(), cell.end());
    hc.centers.push_back(pick);
    hc.radii.push_back(radii[pick]);
    hc.cells.push_back(std::move(cell));
  }
  return hc;
}

MstResult mst_weak_solve(const WeakOracle& wo, uint64_t seed) {
  const int n = wo.metric().size();
  MstResult res;
  if (n <= 1) {
    res.tree.root = 0;
    res.tree.parent.assign(n, -1);
    return res;
  }

  auto weak = [&](PointId a, PointId b) { return wo.query(a, b); };

  // Sampled triangle validation; the same pass supplies the minimum observed
  // weak distance that scales the tie-breaking perturbation.
  double min_d = std::numeric_limits<double>::infinity();
  if (n >= 3) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ 0x7219a2b3c4d5e6f7ull));
    std::uniform_int_distribution<int> pick(0, n - 1);
    long trials = std::min<long>(100000, long(n) * (n - 1) * (n - 2));
    for (long t = 0; t < trials; ++t) {
      int a = pick(rng), b = pick(rng), c = pick(rng);
      if (a == b || b == c || a == c) continue;
      double ab = weak(a, b), ac = weak(a, c), cb = weak(c, b);
      min_d = std::min({min_d, ab, ac, cb});
      if (ab > ac + cb + 1e-9 * std::max(ab, 1.0)) res.metric_ok = false;
    }
  }
  if (!std::isfinite(min_d)) min_d = weak(0, 1);
  res.eps = min_d / (double(n) * n * n * n);

  auto perturbed = perturb_unique(weak, res.eps, seed);
  SpanningTree prim = mst_dense(n, perturbed, 0);
  res.tree = bounded_degree_transform(prim, perturbed);
  res.weak_weight = res.tree.weight(perturbed);
  return res;
}

}  // namespace wso
