#include "wso/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "wso/mst.hpp"
#include "json.hpp"

namespace wso {

namespace {

double wall_now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <class Dist>
Clustering gonzalez(int k, const Metric& metric, Dist&& dist) {
  const int n = metric.size();
  Clustering out;
  out.centers.push_back(0);
  std::vector<double> dmin(n, std::numeric_limits<double>::infinity());
  dmin[0] = 0.0;
  while (int(out.centers.size()) < k && int(out.centers.size()) < n) {
    PointId last = out.centers.back();
    for (PointId p = 0; p < n; ++p)
      if (p != last) dmin[p] = std::min(dmin[p], dist(p, last));
    PointId far = 0;
    for (PointId p = 1; p < n; ++p)
      if (dmin[p] > dmin[far]) far = p;
    out.centers.push_back(far);
    dmin[far] = 0.0;
  }
  out.assignment.assign(n, 0);
  for (PointId p = 0; p < n; ++p) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < out.centers.size(); ++c) {
      double d = p == out.centers[c] ? 0.0 : dist(p, out.centers[c]);
      if (d < best) {
        best = d;
        out.assignment[p] = int(c);
      }
    }
  }
  return out;
}

}  // namespace

Clustering baseline_farthest_first(BaselineMode mode, int k, const Metric& metric,
                                   const WeakOracle& wo) {
  EvalAccessor eval(metric);
  uint64_t weak_before = wo.ledger().weak_count.load();
  Clustering out;
  if (mode == BaselineMode::weak_only) {
    out = gonzalez(k, metric, [&](PointId a, PointId b) { return wo.query(a, b); });
  } else {
    out = gonzalez(k, metric, [&](PointId a, PointId b) { return eval(a, b); });
    out.strong_point_count = metric.size();  // everything revealed
  }
  out.weak_count = wo.ledger().weak_count.load() - weak_before;
  out.cost = eval.kcenter_cost(out.centers, out.assignment);
  return out;
}

Clustering baseline_kmeanspp(BaselineMode mode, int k, int q, const Metric& metric,
                             const WeakOracle& wo, uint64_t seed) {
  const int n = metric.size();
  EvalAccessor eval(metric);
  uint64_t weak_before = wo.ledger().weak_count.load();
  auto dist = [&](PointId a, PointId b) {
    return mode == BaselineMode::weak_only ? wo.query(a, b) : eval(a, b);
  };
  auto pw = [&](double d) { return q == 2 ? d * d : d; };

  std::mt19937_64 rng(detail::splitmix64(seed ^ 0xba5e11e5ull));
  Clustering out;
  {
    std::uniform_int_distribution<PointId> first(0, n - 1);
    out.centers.push_back(first(rng));
    std::vector<double> dmin(n, std::numeric_limits<double>::infinity());
    while (int(out.centers.size()) < std::min(k, n)) {
      PointId last = out.centers.back();
      std::vector<double> mass(n, 0.0);
      for (PointId p = 0; p < n; ++p) {
        if (p != last) dmin[p] = std::min(dmin[p], dist(p, last));
        else dmin[p] = 0.0;
        mass[p] = pw(dmin[p]);
      }
      std::discrete_distribution<PointId> pick(mass.begin(), mass.end());
      out.centers.push_back(pick(rng));
    }
  }

  out.assignment.assign(n, 0);
  for (PointId p = 0; p < n; ++p) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < out.centers.size(); ++c) {
      double d = p == out.centers[c] ? 0.0 : dist(p, out.centers[c]);
      if (d < best) {
        best = d;
        out.assignment[p] = int(c);
      }
    }
  }

  const auto* pts = dynamic_cast<const PointsMetric*>(&metric);
  if (mode == BaselineMode::strong_full && pts != nullptr && q == 2) {
    // Lloyd on the revealed coordinates; cost against the centroids.
    int dim = pts->dim();
    std::vector<double> centroids(out.centers.size() * dim);
    for (size_t c = 0; c < out.centers.size(); ++c)
      std::copy_n(pts->raw(out.centers[c]), dim, &centroids[c * dim]);
    auto sq_to = [&](PointId p, size_t c) {
      const double* x = pts->raw(p);
      double s = 0.0;
      for (int i = 0; i < dim; ++i) {
        double t = x[i] - centroids[c * dim + i];
        s += t * t;
      }
      return s;
    };
    for (int round = 0; round < 15; ++round) {
      for (PointId p = 0; p < n; ++p) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t c = 0; c < out.centers.size(); ++c) {
          double d = sq_to(p, c);
          if (d < best) {
            best = d;
            out.assignment[p] = int(c);
          }
        }
      }
      std::vector<double> sum(out.centers.size() * dim, 0.0);
      std::vector<int> cnt(out.centers.size(), 0);
      for (PointId p = 0; p < n; ++p) {
        const double* x = pts->raw(p);
        for (int i = 0; i < dim; ++i) sum[out.assignment[p] * dim + i] += x[i];
        ++cnt[out.assignment[p]];
      }
      for (size_t c = 0; c < out.centers.size(); ++c)
        if (cnt[c] > 0)
          for (int i = 0; i < dim; ++i) centroids[c * dim + i] = sum[c * dim + i] / cnt[c];
    }
    double total = 0.0;
    double s2 = pts->scale() * pts->scale();
    for (PointId p = 0; p < n; ++p) total += sq_to(p, out.assignment[p]) / s2;
    out.cost = total;
    out.strong_point_count = n;
    out.weak_count = wo.ledger().weak_count.load() - weak_before;
    return out;
  }

  if (mode == BaselineMode::strong_full) out.strong_point_count = n;
  out.weak_count = wo.ledger().weak_count.load() - weak_before;
  out.cost = eval.kcluster_cost(out.centers, out.assignment, q);
  return out;
}

namespace {

RunRecord base_record(const SweepConfig& cfg, const std::string& alg, double delta,
                      uint64_t seed, double scale) {
  RunRecord r;
  r.algorithm = alg;
  r.suite = cfg.suite;
  r.n = cfg.n;
  r.k = cfg.k;
  r.delta = delta;
  r.seed = seed;
  r.scale = scale;
  return r;
}

uint64_t mask_seed(uint64_t seed, double delta) {
  return detail::splitmix64(seed * 1000003ull + uint64_t(std::llround(delta * 1e6)));
}

}  // namespace

std::vector<RunRecord> run_sweep(const SweepConfig& cfg) {
  std::vector<RunRecord> records;

  auto guarded = [&](RunRecord r, auto&& body) {
    double t0 = wall_now();
    try {
      body(r);
    } catch (const std::exception& e) {
      r.failed = true;
      r.note = e.what();
    }
    r.wall_seconds = wall_now() - t0;
    records.push_back(std::move(r));
  };

  if (cfg.suite == "sbm-kcenter" || cfg.suite == "sbm-kmeans") {
    for (uint64_t seed : cfg.seeds) {
      LabeledInstance inst = gen_sbm(cfg.n, cfg.k, seed);
      const Metric& m = *inst.metric;
      Adversary adv = policy_cluster_flip(m, inst.labels);
      for (double delta : cfg.deltas) {
        CorruptionMask mask(mask_seed(seed, delta), delta);
        for (double scale : cfg.scales) {
          guarded(base_record(cfg, cfg.suite == "sbm-kcenter" ? "wso-kcenter" : "wso-kcluster",
                              delta, seed, scale),
                  [&](RunRecord& r) {
                    auto ledger = std::make_shared<QueryLedger>();
                    WeakOracle wo(m, ledger, mask, adv);
                    StrongOracle so(m, ledger, StrongMode::point);
                    if (cfg.suite == "sbm-kcenter") {
                      KCenterConfig kc;
                      kc.k = cfg.k;
                      kc.delta = delta;
                      kc.seed = seed;
                      kc.scale = scale;
                      KCenterSolution sol = kcenter_solve(m, wo, so, kc);
                      r.cost = sol.true_cost;
                      r.weak_count = sol.weak_count;
                      r.strong_point_count = sol.strong_point_count;
                      r.strong_edge_count = sol.strong_edge_count;
                    } else {
                      KClusterConfig kc;
                      kc.k = cfg.k;
                      kc.q = cfg.q;
                      kc.delta = delta;
                      kc.seed = seed;
                      kc.threshold_scale = scale;
                      kc.cap_scale = scale / 30.0;
                      KClusterSolution sol = kcluster_solve(m, wo, so, kc);
                      r.cost = sol.true_cost;
                      r.weak_count = sol.weak_count;
                      r.strong_point_count = sol.strong_point_count;
                      r.strong_edge_count = sol.strong_edge_count;
                    }
                  });
        }
        for (auto mode : {BaselineMode::strong_full, BaselineMode::weak_only}) {
          std::string tag = mode == BaselineMode::strong_full ? "strong" : "weak";
          std::string alg = (cfg.suite == "sbm-kcenter" ? "ff-" : "kmeanspp-") + tag;
          guarded(base_record(cfg, alg, delta, seed, 1.0), [&](RunRecord& r) {
            auto ledger = std::make_shared<QueryLedger>();
            WeakOracle wo(m, ledger, mask, adv);
            Clustering c = cfg.suite == "sbm-kcenter"
                               ? baseline_farthest_first(mode, cfg.k, m, wo)
                               : baseline_kmeanspp(mode, cfg.k, cfg.q, m, wo, seed);
            r.cost = c.cost;
            r.weak_count = c.weak_count;
            r.strong_point_count = c.strong_point_count;
          });
        }
      }
    }
    return records;
  }

  if (cfg.suite == "mst-lb") {
    for (double delta : cfg.deltas) {
      for (uint64_t seed : cfg.seeds) {
        guarded(base_record(cfg, "wso-mst", delta, seed, 1.0), [&](RunRecord& r) {
          ScriptedInstance inst = gen_mst_metric_lb(cfg.n, seed, delta);
          const Metric& m = *inst.metric;
          auto ledger = std::make_shared<QueryLedger>();
          WeakOracle wo(m, ledger, inst.weak);
          MstResult got = mst_weak_solve(wo, seed);
          EvalAccessor eval(m);
          auto true_d = [&](PointId a, PointId b) { return eval(a, b); };
          SpanningTree exact = mst_dense(m.size(), true_d, 0);
          r.cost = got.tree.weight(true_d) / exact.weight(true_d);
          r.weak_count = ledger->weak_count.load();
          r.strong_point_count = ledger->strong_point_count.load();
          r.strong_edge_count = ledger->strong_edge_count.load();
          r.note = "cost = true-weight ratio vs exact MST";
        });
      }
    }
    return records;
  }

  throw std::invalid_argument("run_sweep: unknown suite " + cfg.suite);
}

const RunRecord& select_tradeoff(const std::vector<RunRecord>& records,
                                 double exponent) {
  const RunRecord* best = nullptr;
  double best_score = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (r.failed) continue;
    uint64_t q = r.strong_point_count + r.strong_edge_count;
    double score;
    if (r.cost <= 0.0)
      score = -std::numeric_limits<double>::infinity();
    else
      score = std::log(double(std::max<uint64_t>(q, 1))) + exponent * std::log(r.cost);
    bool better = false;
    if (best == nullptr || score < best_score - 1e-12) {
      better = true;
    } else if (score <= best_score + 1e-12) {
      uint64_t bq = best->strong_point_count + best->strong_edge_count;
      if (q < bq || (q == bq && r.seed < best->seed)) better = true;
    }
    if (better) {
      best = &r;
      best_score = score;
    }
  }
  if (best == nullptr) throw std::runtime_error("select_tradeoff: no successful runs");
  return *best;
}

void write_records_csv(const std::string& path, const std::vector<RunRecord>& rs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "algorithm,suite,n,k,delta,scale,seed,weak,strong_point,strong_edge,"
         "cost,log10_cost,wall_seconds,failed,note\n";
  for (const auto& r : rs) {
    out << r.algorithm << ',' << r.suite << ',' << r.n << ',' << r.k << ','
        << r.delta << ',' << r.scale << ',' << r.seed << ',' << r.weak_count << ','
        << r.strong_point_count << ',' << r.strong_edge_count << ',' << r.cost << ','
        << (r.cost > 0 ? std::log10(r.cost) : 0.0) << ',' << r.wall_seconds << ','
        << (r.failed ? 1 : 0) << ',' << '"' << r.note << '"' << '\n';
  }
}

namespace {

nlohmann::json record_json(const RunRecord& r) {
  return {{"algorithm", r.algorithm}, {"suite", r.suite},       {"n", r.n},
          {"k", r.k},                 {"delta", r.delta},       {"scale", r.scale},
          {"seed", r.seed},           {"weak", r.weak_count},
          {"strong_point", r.strong_point_count},
          {"strong_edge", r.strong_edge_count},
          {"cost", r.cost},           {"wall_seconds", r.wall_seconds},
          {"failed", r.failed},       {"note", r.note}};
}

}  // namespace

void write_tradeoff_json(const std::string& path, const SweepConfig& cfg,
                         const std::vector<RunRecord>& rs) {
  nlohmann::json j;
  j["suite"] = cfg.suite;
  j["n"] = cfg.n;
  j["k"] = cfg.k;
  j["exponent"] = cfg.tradeoff_exponent;
  nlohmann::json per_delta = nlohmann::json::array();
  for (double delta : cfg.deltas) {
    std::vector<RunRecord> group;
    for (const auto& r : rs)
      if (r.delta == delta && r.algorithm.rfind("wso-", 0) == 0) group.push_back(r);
    nlohmann::json g;
    g["delta"] = delta;
    try {
      g["selected"] = record_json(select_tradeoff(group, cfg.tradeoff_exponent));
    } catch (const std::exception& e) {
      g["selected"] = nullptr;
      g["error"] = e.what();
    }
    per_delta.push_back(std::move(g));
  }
  j["per_delta"] = std::move(per_delta);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << '\n';
}

void write_ledger_json(const std::string& path, const std::vector<RunRecord>& rs) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rs) j.push_back(record_json(r));
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << '\n';
}

}  // namespace wso
