#include "wso/kcluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace wso {

int kcluster_threshold(int n, double delta, double threshold_scale) {
  double base = std::max(8.0 * std::log2(std::max(n, 2)), 32.0);
  int scaled_base = std::max(1, int(std::lround(base * threshold_scale)));
  return scaled_sample_size(scaled_base, delta);
}

int kcluster_cap(int n, int k, double cap_scale) {
  double l2 = std::log2(std::max(n, 2));
  return std::max(1, int(std::ceil(18.0 * k * l2 * l2 * cap_scale)));
}

void HeavyBallIndex::insert(PointId x, StrongOracle& so) {
  so.reveal(x);
  int m = int(members_.size());
  std::vector<double> row(m + 1, 0.0);
  for (int i = 0; i < m; ++i) {
    double d = so.distance(members_[i], x);
    row[i] = d;
    dists_[i].push_back(d);
  }
  members_.push_back(x);
  dists_.push_back(std::move(row));
  balls_.emplace_back();
  radii_.push_back(0.0);

  int sz = m + 1;
  if (sz < threshold_) return;
  if (sz == threshold_) {
    for (int i = 0; i < sz; ++i) rebuild_ball(i);
    return;
  }
  // Update existing balls: the new member may displace each ball's worst
  // element (largest (distance, index), so ties keep the lowest index).
  for (int i = 0; i < m; ++i) {
    auto worse = [&](int a, int b) {
      double da = dists_[i][a], db = dists_[i][b];
      return da < db || (da == db && a < b);
    };
    auto& ball = balls_[i];
    if (worse(m, ball.front())) {
      std::pop_heap(ball.begin(), ball.end(), worse);
      ball.back() = m;
      std::push_heap(ball.begin(), ball.end(), worse);
      radii_[i] = dists_[i][ball.front()];
    }
  }
  rebuild_ball(m);
}

void HeavyBallIndex::rebuild_ball(int i) {
  int sz = int(members_.size());
  auto worse = [&](int a, int b) {
    double da = dists_[i][a], db = dists_[i][b];
    return da < db || (da == db && a < b);
  };
  std::vector<int> idx(sz);
  std::iota(idx.begin(), idx.end(), 0);
  std::nth_element(idx.begin(), idx.begin() + (threshold_ - 1), idx.end(), worse);
  idx.resize(threshold_);
  std::make_heap(idx.begin(), idx.end(), worse);
  radii_[i] = dists_[i][idx.front()];
  balls_[i] = std::move(idx);
}

HeavyBallDistance heavy_ball_distance(PointId y, const HeavyBallIndex& index,
                                      const WeakOracle& wo, double quantile,
                                      int candidates) {
  const int m = index.size();
  if (m < index.threshold())
    throw std::logic_error("heavy_ball_distance: index not warmed up");
  std::vector<double> w(m);
  for (int j = 0; j < m; ++j) w[j] = wo.query(y, index.member(j));

  // Strided candidate subset: deterministic and independent of the weak
  // values, so an adversary cannot crowd honest balls out of consideration.
  std::vector<int> cand;
  if (candidates > 0 && m > candidates) {
    int stride = (m + candidates - 1) / candidates;
    cand.reserve(m / stride + 1);
    for (int i = 0; i < m; i += stride) cand.push_back(i);
  } else {
    cand.resize(m);
    std::iota(cand.begin(), cand.end(), 0);
  }

  int t = index.threshold();
  size_t r = std::min(size_t(t - 1), size_t(std::ceil(quantile * t)) - 1);
  std::vector<double> scratch(t);
  HeavyBallDistance best{0.0, -1};
  for (int i : cand) {
    const auto& ball = index.ball(i);
    for (int j = 0; j < t; ++j) scratch[j] = w[ball[j]];
    std::nth_element(scratch.begin(), scratch.begin() + r, scratch.end());
    double q = scratch[r] + 6.0 * index.radius(i);
    if (best.member_index < 0 || q < best.value) {
      best.value = q;
      best.member_index = i;
    }
  }
  return best;
}

Coreset coreset_stream(const std::vector<PointId>& X, double opt_guess,
                       const KClusterConfig& cfg, const WeakOracle& wo,
                       StrongOracle& so) {
  const int n = wo.metric().size();
  const int t = kcluster_threshold(n, cfg.delta, cfg.threshold_scale);
  const int cap = kcluster_cap(n, cfg.k, cfg.cap_scale);
  const double l2 = std::log2(std::max(n, 2));
  const double f = opt_guess / (20.0 * cfg.k * l2 * l2);

  std::vector<PointId> stream(X);
  if (cfg.shuffle_stream) {
    std::mt19937_64 rng(detail::splitmix64(cfg.seed ^ 0x57ea3c0de));
    std::shuffle(stream.begin(), stream.end(), rng);
  }

  HeavyBallIndex index(t);
  Coreset cs;
  cs.stream_assignment.assign(n, -1);
  std::vector<int64_t> weights;
  // A guess that is still admitting every point well past the warm-up phase
  // can only end in the cap abort; cutting it early saves strong reveals.
  const int warm_abort = int(std::ceil(1.3 * cfg.k * t));

  auto admit = [&](PointId y) {
    index.insert(y, so);
    cs.members.push_back(y);
    weights.push_back(1);
  };

  for (PointId y : stream) {
    ++cs.processed;
    if (index.size() < t) {
      admit(y);
      continue;
    }
    HeavyBallDistance hb =
        heavy_ball_distance(y, index, wo, cfg.q_quantile, cfg.q_candidates);
    double stat = cfg.q == 2 ? hb.value * hb.value : hb.value;
    double p = f > 0.0 ? std::min(1.0, stat / f) : 1.0;
    if (point_uniform(cfg.seed, HashStream::sample, y) < p) {
      admit(y);
      if (int(cs.members.size()) > cap ||
          (cs.processed == int(cs.members.size()) && cs.processed > warm_abort)) {
        cs.aborted = true;
        break;
      }
    } else {
      ++weights[hb.member_index];
      cs.stream_assignment[y] = hb.member_index;
    }
  }
  cs.weights = std::move(weights);
  return cs;
}

GuessResult guess_opt(const std::vector<PointId>& X, const KClusterConfig& cfg,
                      const WeakOracle& wo, StrongOracle& so) {
  const int n = wo.metric().size();
  double aspect = std::max(1.0, wo.metric().aspect_ratio());
  int lo_e = int(std::ceil(std::log2(std::max(n, 2))));
  int hi_e = int(std::ceil(std::log2(std::max(n, 2)) + cfg.q * std::log2(aspect)));
  hi_e = std::max(hi_e, lo_e + 1);

  GuessResult res;
  auto run = [&](int e) {
    ++res.probes;
    return coreset_stream(X, std::ldexp(1.0, e), cfg, wo, so);
  };

  Coreset c = run(lo_e);
  if (!c.aborted) {
    res.opt_guess = std::ldexp(1.0, lo_e);
    res.coreset = std::move(c);
    return res;
  }
  Coreset top = run(hi_e);
  if (top.aborted) {
    // Even the largest guess aborts: the cap is too small for this instance.
    res.opt_guess = std::ldexp(1.0, hi_e);
    res.coreset = std::move(top);
    return res;
  }
  int lo = lo_e, hi = hi_e;
  Coreset at_hi = std::move(top);
  while (hi - lo > std::max(1, cfg.guess_gap_stop)) {
    int mid = lo + (hi - lo) / 2;
    Coreset c_mid = run(mid);
    if (c_mid.aborted) {
      lo = mid;
    } else {
      hi = mid;
      at_hi = std::move(c_mid);
    }
  }
  res.opt_guess = std::ldexp(1.0, hi);
  res.coreset = std::move(at_hi);
  return res;
}

namespace {

double weighted_cost(const Coreset& cs, const std::vector<int>& centers, int q,
                     const EvalAccessor& eval) {
  double total = 0.0;
  for (size_t i = 0; i < cs.members.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int c : centers)
      best = std::min(best, eval(cs.members[i], cs.members[c]));
    total += double(cs.weights[i]) * (q == 2 ? best * best : best);
  }
  return total;
}

}  // namespace

std::vector<PointId> weighted_postcluster(const Coreset& coreset, int k, int q,
                                          uint64_t seed, const EvalAccessor& eval) {
  const int m = int(coreset.members.size());
  if (m == 0) return {};
  if (k >= m) return coreset.members;

  std::mt19937_64 rng(detail::splitmix64(seed ^ 0x9e3779b97f4a7c15ull));
  auto pw = [&](double d) { return q == 2 ? d * d : d; };

  // Weighted ++ seeding over coreset members.
  std::vector<int> centers;
  {
    std::vector<double> w(m);
    for (int i = 0; i < m; ++i) w[i] = double(coreset.weights[i]);
    std::discrete_distribution<int> first(w.begin(), w.end());
    centers.push_back(first(rng));
    std::vector<double> dmin(m, std::numeric_limits<double>::infinity());
    while (int(centers.size()) < k) {
      int last = centers.back();
      for (int i = 0; i < m; ++i)
        dmin[i] = std::min(dmin[i], eval(coreset.members[i], coreset.members[last]));
      std::vector<double> mass(m);
      double total = 0.0;
      for (int i = 0; i < m; ++i) {
        mass[i] = double(coreset.weights[i]) * pw(dmin[i]);
        total += mass[i];
      }
      if (total <= 0.0) {
        // All mass sits at the chosen centers: take the first unchosen member.
        for (int i = 0; i < m; ++i)
          if (std::find(centers.begin(), centers.end(), i) == centers.end()) {
            centers.push_back(i);
            break;
          }
        continue;
      }
      std::discrete_distribution<int> pick(mass.begin(), mass.end());
      centers.push_back(pick(rng));
    }
  }

  // Alternate nearest-center assignment with weighted medoid recomputation.
  std::vector<int> assign(m, 0);
  for (int round = 0; round < 25; ++round) {
    for (int i = 0; i < m; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int bi = 0;
      for (size_t c = 0; c < centers.size(); ++c) {
        double d = eval(coreset.members[i], coreset.members[centers[c]]);
        if (d < best) {
          best = d;
          bi = int(c);
        }
      }
      assign[i] = bi;
    }
    bool changed = false;
    for (size_t c = 0; c < centers.size(); ++c) {
      std::vector<int> cluster;
      for (int i = 0; i < m; ++i)
        if (assign[i] == int(c)) cluster.push_back(i);
      if (cluster.empty()) continue;
      int best_i = centers[c];
      double best_cost = std::numeric_limits<double>::infinity();
      for (int cand : cluster) {
        double cost = 0.0;
        for (int i : cluster)
          cost += double(coreset.weights[i]) *
                  pw(eval(coreset.members[i], coreset.members[cand]));
        if (cost < best_cost) {
          best_cost = cost;
          best_i = cand;
        }
      }
      if (best_i != centers[c]) {
        centers[c] = best_i;
        changed = true;
      }
    }
    if (!changed) break;
  }

  // Swap search for small coresets (exhaustive enough for k-median).
  if (m <= 500) {
    double cur = weighted_cost(coreset, centers, q, eval);
    bool improved = true;
    for (int pass = 0; pass < 12 && improved; ++pass) {
      improved = false;
      for (size_t c = 0; c < centers.size(); ++c) {
        for (int cand = 0; cand < m; ++cand) {
          if (std::find(centers.begin(), centers.end(), cand) != centers.end())
            continue;
          int old = centers[c];
          centers[c] = cand;
          double cost = weighted_cost(coreset, centers, q, eval);
          if (cost + 1e-12 < cur) {
            cur = cost;
            improved = true;
          } else {
            centers[c] = old;
          }
        }
      }
    }
  }

  std::vector<PointId> out;
  out.reserve(centers.size());
  for (int c : centers) out.push_back(coreset.members[c]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

KClusterSolution kcluster_solve(const Metric& metric, const WeakOracle& wo,
                                StrongOracle& so, const KClusterConfig& cfg) {
  const int n = metric.size();
  std::vector<PointId> X(n);
  std::iota(X.begin(), X.end(), 0);

  GuessResult guess = guess_opt(X, cfg, wo, so);
  if (guess.coreset.aborted)
    throw std::runtime_error("kcluster_solve: every guess aborted (cap too small)");
  const Coreset& cs = guess.coreset;

  EvalAccessor eval(metric);
  std::vector<PointId> centers = weighted_postcluster(cs, cfg.k, cfg.q, cfg.seed, eval);

  // Members go to their nearest center; stream points follow their member.
  std::vector<int> member_center(cs.members.size(), 0);
  for (size_t i = 0; i < cs.members.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < centers.size(); ++c) {
      double d = eval(cs.members[i], centers[c]);
      if (d < best) {
        best = d;
        member_center[i] = int(c);
      }
    }
  }
  std::vector<int> member_index(n, -1);
  for (size_t i = 0; i < cs.members.size(); ++i) member_index[cs.members[i]] = int(i);

  KClusterSolution sol;
  sol.assignment.assign(n, 0);
  for (PointId p = 0; p < n; ++p) {
    int mi = cs.stream_assignment[p];
    if (mi < 0) mi = member_index[p];
    if (mi < 0) throw std::logic_error("kcluster_solve: point missing from stream");
    sol.assignment[p] = member_center[mi];
  }
  sol.centers = std::move(centers);
  sol.true_cost = eval.kcluster_cost(sol.centers, sol.assignment, cfg.q);
  sol.opt_guess_final = guess.opt_guess;
  sol.coreset_size = int(cs.members.size());
  sol.guess_probes = guess.probes;
  sol.weak_count = wo.ledger().weak_count.load();
  sol.strong_point_count = so.ledger().strong_point_count.load();
  sol.strong_edge_count = so.ledger().strong_edge_count.load();
  return sol;
}

}  // namespace wso
