#include "wso/kcenter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace wso {

CarveResult greedy_ball_carve(const std::vector<PointId>& S, double R,
                              StrongOracle& so) {
  CarveResult res;
  res.radius_used = R;
  std::vector<PointId> order(S);
  std::sort(order.begin(), order.end());
  std::vector<uint8_t> covered(order.size(), 0);
  for (size_t i = 0; i < order.size(); ++i) {
    if (covered[i]) continue;
    PointId c = order[i];
    res.centers.push_back(c);
    for (size_t j = i; j < order.size(); ++j) {
      if (covered[j]) continue;
      // avoid self-distance calls: edge-mode oracles reject them
      if (order[j] == c || so.distance(c, order[j]) <= R) {
        covered[j] = 1;
        res.assignment_points.push_back(order[j]);
        res.assignment_centers.push_back(c);
      }
    }
  }
  return res;
}

double median_estimate(PointId x, const std::vector<PointId>& U,
                       const WeakOracle& wo) {
  if (U.empty()) throw std::invalid_argument("median_estimate: empty U");
  std::vector<double> vals;
  vals.reserve(U.size());
  for (PointId u : U) vals.push_back(wo.query(x, u));
  size_t mid = (vals.size() - 1) / 2;  // lower median
  std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
  return vals[mid];
}

namespace {

struct SampleSizes {
  int s_target, t_target, complete_thresh, candidate_cap;
};

SampleSizes sizes_for(int n, const KCenterConfig& cfg) {
  double l2 = std::log2(std::max(n, 2));
  SampleSizes sz;
  sz.s_target = std::max(cfg.k + 1, int(std::lround(cfg.scale * cfg.c_S * cfg.k * l2)));
  sz.t_target = scaled_sample_size(
      std::max(1, int(std::lround(cfg.scale * cfg.c_T * cfg.k * l2))), cfg.delta);
  // Validity floor for a ball, deliberately not multiplied by cfg.scale:
  // slivers below it would make the median estimates unreliable.
  sz.complete_thresh = std::max(
      3, scaled_sample_size(std::max(1, int(std::lround(cfg.c_complete * l2))),
                            cfg.delta));
  sz.candidate_cap = std::max(4 * cfg.k, int(40.0 * cfg.k * l2));
  return sz;
}

}  // namespace

SampleCoverResult sample_and_cover(const std::vector<PointId>& X, double R,
                                   const KCenterConfig& cfg, const WeakOracle& wo,
                                   StrongOracle& so) {
  const int n = wo.metric().size();
  SampleSizes sz = sizes_for(n, cfg);

  SampleCoverResult res;
  res.candidate_of.assign(n, -1);
  std::vector<PointId> active(X);

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    if (active.empty()) return res;

    if (int(active.size()) <= sz.s_target + sz.t_target) {
      // Recursion tail: strong-query the whole remainder and carve directly.
      for (PointId p : active) so.reveal(p);
      CarveResult carve = greedy_ball_carve(active, R, so);
      if (int(carve.centers.size()) > cfg.k) {
        res.aborted = true;
        return res;
      }
      for (PointId c : carve.centers) res.candidates.push_back(c);
      for (size_t i = 0; i < carve.assignment_points.size(); ++i)
        res.candidate_of[carve.assignment_points[i]] = carve.assignment_centers[i];
      res.iteration_coverage.push_back(1.0);
      return res;
    }

    // Samples come from a fixed per-iteration permutation of X, filtered by
    // the active set. Different radius probes therefore reveal (nearly) the
    // same points and the distinct-point ledger is shared across the search.
    std::vector<PointId> order(X);
    std::mt19937_64 rng(detail::splitmix64(cfg.seed ^ (0x5eedc0ffee ^ uint64_t(iter))));
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<uint8_t> is_active(n, 0);
    for (PointId p : active) is_active[p] = 1;
    int take = sz.s_target + sz.t_target;
    std::vector<PointId> pool;
    pool.reserve(take);
    for (PointId p : order) {
      if (!is_active[p]) continue;
      pool.push_back(p);
      if (int(pool.size()) == take) break;
    }
    std::vector<PointId> S(pool.begin(), pool.begin() + sz.s_target);
    std::vector<PointId> T(pool.begin() + sz.s_target, pool.begin() + take);
    for (PointId p : S) so.reveal(p);
    for (PointId p : T) so.reveal(p);

    CarveResult carve = greedy_ball_carve(S, R, so);
    if (int(carve.centers.size()) > cfg.k) {
      res.aborted = true;
      return res;
    }

    // Complete balls B(c, 3R): enough T points inside.
    std::vector<PointId> complete;
    std::vector<std::vector<PointId>> ball_members;
    for (PointId c : carve.centers) {
      std::vector<PointId> u;
      for (PointId t : T)
        if (so.distance(c, t) <= 3.0 * R) u.push_back(t);
      if (int(u.size()) >= sz.complete_thresh) {
        complete.push_back(c);
        ball_members.push_back(std::move(u));
      }
    }

    size_t active_before = active.size();
    size_t covered_count = 0;

    std::vector<uint8_t> in_sample(n, 0);
    for (PointId p : S) in_sample[p] = 1;
    for (PointId p : T) in_sample[p] = 1;

    for (PointId c : complete) res.candidates.push_back(c);
    auto place_sampled = [&](PointId p) {
      PointId best = -1;
      double bd = 3.0 * R;
      for (PointId c : complete) {
        double d = so.distance(c, p);
        if (d <= bd && (best < 0 || d < bd)) {
          bd = d;
          best = c;
        }
      }
      if (best >= 0) {
        res.candidate_of[p] = best;
      } else {
        // Uncovered sample points become candidate centers themselves.
        res.candidates.push_back(p);
        res.candidate_of[p] = p;
      }
      ++covered_count;
    };
    for (PointId p : S) place_sampled(p);
    for (PointId p : T) place_sampled(p);

    // Order-statistic assignment of everything else against complete balls.
    auto quantile_estimate = [&](PointId x, const std::vector<PointId>& U) {
      std::vector<double> vals;
      vals.reserve(U.size());
      for (PointId u : U) vals.push_back(wo.query(x, u));
      size_t r = std::min(vals.size() - 1,
                          size_t(std::ceil(cfg.assign_quantile * vals.size())) - 1);
      std::nth_element(vals.begin(), vals.begin() + r, vals.end());
      return vals[r];
    };
    std::vector<PointId> remaining;
    remaining.reserve(active.size());
    for (PointId p : active)
      if (!in_sample[p]) remaining.push_back(p);

    std::vector<int> pick_ball(remaining.size(), -1);
#pragma omp parallel for schedule(dynamic, 64)
    for (size_t i = 0; i < remaining.size(); ++i) {
      PointId p = remaining[i];
      double best_est = 6.0 * R;
      int best_ball = -1;
      for (size_t b = 0; b < complete.size(); ++b) {
        double est = quantile_estimate(p, ball_members[b]);
        if (est <= 6.0 * R && (best_ball < 0 || est < best_est)) {
          best_est = est;
          best_ball = int(b);
        }
      }
      pick_ball[i] = best_ball;
    }

    std::vector<PointId> next_active;
    for (size_t i = 0; i < remaining.size(); ++i) {
      if (pick_ball[i] >= 0) {
        res.candidate_of[remaining[i]] = complete[pick_ball[i]];
        ++covered_count;
      } else {
        next_active.push_back(remaining[i]);
      }
    }

    double coverage = double(covered_count) / double(active_before);
    res.iteration_coverage.push_back(coverage);
    if (coverage < cfg.min_coverage || int(res.candidates.size()) > sz.candidate_cap) {
      res.aborted = true;
      return res;
    }
    active = std::move(next_active);
  }
  res.aborted = !active.empty();
  return res;
}

KCenterSolution kcenter_solve(const Metric& metric, const WeakOracle& wo,
                              StrongOracle& so, const KCenterConfig& cfg) {
  const int n = metric.size();
  std::vector<PointId> X(n);
  std::iota(X.begin(), X.end(), 0);

  double base = 1.0 + cfg.epsilon;
  int L = std::max(0, int(std::ceil(std::log(metric.aspect_ratio()) / std::log(base))));

  KCenterSolution sol;
  SampleCoverResult best_cover;
  CarveResult best_carve;
  int best_level = -1;

  auto probe = [&](int level) -> bool {
    double R = std::pow(base, level);
    sol.probed_levels.push_back(level);
    SampleCoverResult cover = sample_and_cover(X, R, cfg, wo, so);
    if (cover.aborted) return false;
    CarveResult carve = greedy_ball_carve(cover.candidates, R, so);
    if (int(carve.centers.size()) > cfg.k) return false;
    best_cover = std::move(cover);
    best_carve = std::move(carve);
    best_level = level;
    return true;
  };

  if (!probe(0)) {
    int lo = 0, hi = L;
    while (!probe(hi)) {
      lo = hi;
      hi += std::max(1, L / 4) ;
      if (hi > 4 * L + 64)
        throw std::runtime_error("kcenter_solve: no successful radius found");
    }
    while (hi - lo > 1) {
      int mid = lo + (hi - lo) / 2;
      if (probe(mid))
        hi = mid;
      else
        lo = mid;
    }
    if (best_level != hi) probe(hi);  // make sure the stored result matches hi
  }

  sol.level_final = best_level;
  sol.R_final = std::pow(base, best_level);
  sol.centers = best_carve.centers;
  sol.iteration_coverage = best_cover.iteration_coverage;

  std::vector<int> center_index(n, -1);
  for (size_t i = 0; i < sol.centers.size(); ++i) center_index[sol.centers[i]] = int(i);
  std::vector<int> candidate_center(n, -1);
  for (size_t i = 0; i < best_carve.assignment_points.size(); ++i)
    candidate_center[best_carve.assignment_points[i]] =
        center_index[best_carve.assignment_centers[i]];

  sol.assignment.assign(n, 0);
  for (PointId p = 0; p < n; ++p) {
    PointId cand = best_cover.candidate_of[p];
    if (cand < 0) throw std::logic_error("kcenter_solve: unassigned point");
    sol.assignment[p] = candidate_center[cand];
    if (sol.assignment[p] < 0) throw std::logic_error("kcenter_solve: dangling candidate");
  }

  EvalAccessor eval(metric);
  sol.true_cost = eval.kcenter_cost(sol.centers, sol.assignment);
  sol.weak_count = wo.ledger().weak_count.load();
  sol.strong_point_count = so.ledger().strong_point_count.load();
  sol.strong_edge_count = so.ledger().strong_edge_count.load();
  return sol;
}

}  // namespace wso
